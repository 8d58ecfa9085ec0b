#pragma once

#include "abctk/zpoly.hpp"

namespace abctk {

// Monic-normalized polynomial arithmetic over F_p, coefficients as canonical
// representatives in [0, p). Coefficient vectors lowest-degree first.
using FpPoly = std::vector<ZZ>;

FpPoly fp_reduce(const ZPoly& f, const ZZ& p);
ZPoly fp_lift(const FpPoly& f);  // symmetric lift to (-p/2, p/2] happens in hensel layer
int fp_degree(const FpPoly& f);
FpPoly fp_trim(FpPoly f);
FpPoly fp_scale(const FpPoly& f, const ZZ& s, const ZZ& p);
FpPoly fp_monic(const FpPoly& f, const ZZ& p);
FpPoly fp_add(const FpPoly& a, const FpPoly& b, const ZZ& p);
FpPoly fp_sub(const FpPoly& a, const FpPoly& b, const ZZ& p);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const ZZ& p);
std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b, const ZZ& p);
FpPoly fp_gcd(FpPoly a, FpPoly b, const ZZ& p);  // monic
FpPoly fp_powmod(const FpPoly& base, const ZZ& e, const FpPoly& mod, const ZZ& p);
FpPoly fp_derivative(const FpPoly& f, const ZZ& p);
// extended gcd: returns (g, u, v) with u*a + v*b = g, g monic
std::tuple<FpPoly, FpPoly, FpPoly> fp_xgcd(const FpPoly& a, const FpPoly& b, const ZZ& p);

// complete factorization into monic irreducibles, deterministic order
// (by degree, then lexicographic on coefficient representatives)
std::vector<std::pair<ZPoly, int>> factor_mod_p(const ZPoly& f, const ZZ& p);

// factorization into primitive irreducibles over the integers (content stripped),
// deterministic order (degree, then lexicographic on coefficients)
std::vector<std::pair<ZPoly, int>> factor_over_int(const ZPoly& f);

bool is_irreducible(const ZPoly& f);

}  // namespace abctk
