#pragma once

#include "abctk/interval.hpp"
#include "abctk/zpoly.hpp"

#include <vector>

namespace abctk {

// Place of Q: a rational prime or the archimedean place.
struct PlaceQ {
    bool finite = false;
    ZZ p;  // valid when finite

    static PlaceQ infinite() { return {}; }
    static PlaceQ prime(ZZ q) { return {true, std::move(q)}; }
    bool operator==(const PlaceQ& o) const {
        return finite == o.finite && (!finite || p == o.p);
    }
    std::string str() const { return finite ? p.get_str() : "inf"; }
};

// Exact algebraic number: irreducible primitive minimal polynomial plus a
// complex rational box isolating exactly one of its roots.
struct AlgebraicNumber {
    ZPoly minpoly;
    QBox box;

    int degree() const { return minpoly.degree(); }
    bool is_rational() const { return minpoly.degree() == 1; }
    QQ rational_value() const { return QQ(-minpoly.coeff(0)) / minpoly.coeff(1); }
    bool is_real() const;  // certified: conjugate-free box or rational
};

AlgebraicNumber alg_from_rational(const QQ& v);

// one AlgebraicNumber per distinct complex root of f (squarefree part taken
// internally), boxes of width ≤ precision, deterministic order
std::vector<AlgebraicNumber> roots_of(const ZPoly& f, const QQ& precision);

// same box-selected root, box width ≤ precision
AlgebraicNumber alg_refine(const AlgebraicNumber& a, const QQ& precision);

AlgebraicNumber alg_add(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber alg_sub(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber alg_mul(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber alg_neg(const AlgebraicNumber& a);
AlgebraicNumber alg_inv(const AlgebraicNumber& a);

bool alg_is_zero(const AlgebraicNumber& a);
bool alg_is_one(const AlgebraicNumber& a);
bool alg_equal(const AlgebraicNumber& a, const AlgebraicNumber& b);

// apply an integer polynomial with rational scaling: value e(a)
AlgebraicNumber alg_eval_qpoly(const QPoly& e, const AlgebraicNumber& a);

struct PrimitiveElementResult {
    AlgebraicNumber gamma;  // = a + k·b
    long k = 0;
    QPoly expr_a, expr_b;  // a = expr_a(γ), b = expr_b(γ), verified exactly
};
PrimitiveElementResult primitive_element(const AlgebraicNumber& a, const AlgebraicNumber& b);

// Newton-polygon valuation data of the conjugates at p: (valuation, count),
// sorted by increasing valuation; counts sum to deg(minpoly)
struct ValuationProfile {
    ZZ p;
    std::vector<std::pair<QQ, int>> entries;

    QQ min_valuation() const { return entries.front().first; }
    QQ max_valuation() const { return entries.back().first; }
};
ValuationProfile valuation_profile(const AlgebraicNumber& a, const ZZ& p);

// Newton-polygon root valuations (−slopes of the lower hull) with multiplicities,
// sorted ascending, for any polynomial with nonzero constant term
std::vector<std::pair<QQ, int>> newton_slopes(const ZPoly& f, const ZZ& p);

// interval of width ≤ precision containing the absolute logarithmic Weil
// height (Mahler-measure formula); lower endpoint ≥ 0
QIv weil_height(const AlgebraicNumber& a, const QQ& precision);

// Projective point over Q̄ with a canonical affine representative.
struct ProjPoint {
    AlgebraicNumber x0, x1;  // [x0 : x1]

    static ProjPoint affine(AlgebraicNumber alpha);  // [1 : α]
    static ProjPoint infinity();                     // [0 : 1]
    bool is_infinity() const { return alg_is_zero(x0); }
};
ProjPoint parse_point(const std::string& s);  // "[a:b]", entries rational or root(...)
std::string point_to_string(const ProjPoint& P);
std::string coordinate_to_string(const AlgebraicNumber& a);

// chordal distance δ_v as a certified interval ⊆ [0,1]; for finite places the
// valuation-cluster hull is used when conjugate clusters are ambiguous
QIv chordal_distance(const ProjPoint& P1, const ProjPoint& P2, const PlaceQ& v,
                     const QQ& precision);

// log|a|_v over the conjugate clusters: interval [min, max] (exact for v
// finite via Newton polygons, boxes for v = ∞); a ≠ 0
QIv log_abs_range(const AlgebraicNumber& a, const PlaceQ& v, unsigned prec_bits);

}  // namespace abctk
