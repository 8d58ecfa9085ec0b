#pragma once

#include "abctk/fermat.hpp"
#include "abctk/heights.hpp"
#include "abctk/zmatrix.hpp"

#include <vector>

namespace abctk {

// An exact algebraic dependency sum c_ij f^i g^j = 0 between two non-constant
// functions on the same curve, found by exact linear algebra over Z.
struct Dependency {
    long L = 0;          // exponent bound of the full monomial grid (i, j < L)
    IntMatrix coeffs;    // coeffs.at(i, j) = c_ij on the block actually used
    long block = 0;      // escalation level: monomials with i + j <= block
    double siegel_bound = 0;     // log-scale solvability bound of the block system
    size_t rows_used = 0, cols_used = 0;
    double H = 0;        // complexity bound of the input pair
};

// Finds a primitive dependency by escalating triangular sub-blocks of the
// L x L monomial grid, L = ceil(4 H^3); deterministic; the result is
// re-verified to vanish identically before being returned.  Throws when every
// admissible block has trivial kernel.
Dependency find_dependency(const FFElement& f, const FFElement& g);

struct ComparisonConstants {
    QQ a;        // the slope 4 H^3
    QIv b;       // certified offset: q + 6 log H + 5 log 2
    long m = 0;  // top f-exponent appearing in the dependency
    QIv q;       // observed affine height of the normalized coefficients
    double H = 0;
};

// Derives the height-comparison constants h(f(Q)) <= a h(g(Q)) + b from a
// dependency; throws when every coefficient with positive f-exponent vanishes
// (the dependency then says nothing about f over g).
ComparisonConstants comparison_constants(const Dependency& dep, double H);

struct ComparisonCheck {
    QIv hf, hg;
    bool violated = false;  // certified: hf.lo > a hg.hi + b.hi
};

struct ComparisonReport {
    QQ a;
    QIv b;
    std::vector<ComparisonCheck> checks;
    bool ok = true;  // no certified violation at any point
};

ComparisonReport verify_comparison(const FFElement& f, const FFElement& g,
                                   const std::vector<CurvePoint>& pts,
                                   const ComparisonConstants& cc, const QQ& precision);

}  // namespace abctk
