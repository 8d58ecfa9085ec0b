#pragma once

#include "abctk/alg.hpp"
#include "abctk/nf.hpp"

#include <string>
#include <utility>
#include <vector>

namespace abctk {

// a reduced fraction of integer polynomials: num/den with poly_gcd(num,den)=1,
// gcd of integer contents 1, and den with positive leading coefficient
struct FFFrac {
    ZPoly num;
    ZPoly den{ZZ(1)};

    bool is_zero() const { return num.degree() < 0; }
};

FFFrac ff_frac(ZPoly num, ZPoly den);
FFFrac frac_add(const FFFrac& a, const FFFrac& b);
FFFrac frac_sub(const FFFrac& a, const FFFrac& b);
FFFrac frac_mul(const FFFrac& a, const FFFrac& b);
FFFrac frac_div(const FFFrac& a, const FFFrac& b);
bool frac_eq(const FFFrac& a, const FFFrac& b);

// element of the function field of the curve x^n + y^n = 1, in the canonical
// presentation f = sum_{i<n} (a_i(x)/q_i(x)) y^i with each fraction reduced
struct FFElement {
    int n = 2;
    std::vector<FFFrac> comp;  // size n, comp[i] multiplies y^i

    bool is_zero() const;
};

FFElement ff_zero(int n);
FFElement ff_const(int n, const QQ& c);
FFElement ff_x(int n);
FFElement ff_y(int n);
FFElement ff_from_frac(int n, const FFFrac& c, int ypow = 0);

// canonicalize raw (a_i, q_i) pairs; throws on a zero denominator
FFElement ff_normalize(int n, const std::vector<std::pair<ZPoly, ZPoly>>& raw);

FFElement ff_add(const FFElement& f, const FFElement& g);
FFElement ff_sub(const FFElement& f, const FFElement& g);
FFElement ff_mul(const FFElement& f, const FFElement& g);
FFElement ff_neg(const FFElement& f);
FFElement ff_inverse(const FFElement& f);  // throws on zero
FFElement ff_pow(const FFElement& f, long e);
bool ff_eq(const FFElement& f, const FFElement& g);

std::string ff_to_string(const FFElement& f);
FFElement parse_ff(int n, const std::string& s);

// a point of the projective Fermat curve X^n + Y^n = Z^n: either affine
// (x0, y0) with x0^n + y0^n = 1, or one of the n points [1 : eta : 0] on
// {Z = 0} with eta^n = -1; membership is verified exactly at construction
struct CurvePoint {
    int n = 2;
    bool at_infinity = false;
    AlgebraicNumber x0, y0;  // affine case
    AlgebraicNumber eta;     // infinite case

    // a primitive element for the field of the coordinates, and the
    // coordinates expressed as polynomials in it
    AlgebraicNumber gamma;
    QPoly xg, yg;  // affine: x0 = xg(gamma), y0 = yg(gamma); infinite: eta = yg(gamma)
};

CurvePoint curve_point(int n, const AlgebraicNumber& x, const AlgebraicNumber& y);
CurvePoint curve_point_infinity(int n, const AlgebraicNumber& eta);
std::string curve_point_to_string(const CurvePoint& Q);

// all points of the curve lying over the roots of the squarefree integer
// polynomial u(x) (finite points only)
std::vector<CurvePoint> fiber_points(int n, const ZPoly& u);
std::vector<CurvePoint> infinity_points(int n);

// H = max(n, the degrees, and exp(height) of the coefficient vectors)
struct Complexity {
    double H = 0;
};
Complexity ff_complexity(const FFElement& f);

// value of f at Q as a point of P^1; resolves 0/0 by exact local expansion
ProjPoint ff_evaluate(const FFElement& f, const CurvePoint& Q);

// degree of f as a morphism C_n -> P^1; throws on constant f
long ff_map_degree(const FFElement& f);

// order of vanishing of a nonzero f at Q (negative = pole order)
long ff_order_at(const FFElement& f, const CurvePoint& Q);

struct CriticalFiber {
    ZPoly xmin;              // irreducible; roots are x-coordinates of critical points
    std::vector<int> e;      // ramification indices of all curve points over all roots
};

struct CriticalLocus {
    std::vector<CriticalFiber> fibers;  // finite critical points, grouped by x-minpoly
    ZPoly eliminant;                    // product of the fiber xmin's (1 when empty)
    std::vector<int> infinity_e;        // ramification index at each point on {Z=0}
    long ramification_degree = 0;       // sum of (e_P - 1) over all points, incl. infinity
    long map_degree = 0;
};

CriticalLocus ff_critical_locus(const FFElement& f);  // throws on constant f

// checks the exact function-field identity expressing (a x - y)^{-1} with the
// denominator a^n/y^{n-1} - (a^n + 1) y; true unless the implementation is broken
bool local_parameter_identity_check(int n, const ZZ& a);

}  // namespace abctk
