#pragma once

#include "abctk/alg.hpp"

namespace abctk {

struct ConductorResult {
    QIv value;         // ≥ 0
    bool exact = true;  // false when some prime only admits certified bounds
    std::vector<ZZ> regular_primes;
    std::vector<ZZ> irregular_primes;
};

struct RootDiscResult {
    QIv value;  // (1/[K:ℚ])·log|D_K|
    bool exact = true;
    int field_degree = 1;
};

struct LiouvilleGap {
    QIv lhs;  // −log δ_v(a,b)
    QIv rhs;  // deg a · deg b · (h(a) + h(b) + log 2)
    bool holds = false;  // false only on a certified violation (lhs.lo > rhs.hi)
};

// h(P): the absolute logarithmic Weil height of a point of P¹(Q̄)
QIv height_point(const ProjPoint& P, const QQ& precision);

// conductor of P relative to the divisor [0]+[1]+[∞]: sum over finite places v
// of Q(P) meeting the support, each weighted f_v·log p/[Q(P):Q]; P ∉ {0,1,∞}
ConductorResult conductor(const ProjPoint& P);

// logarithmic root discriminant of Q(P)
RootDiscResult log_root_disc(const ProjPoint& P);

// logarithmic root discriminant of Q(a, b); exact when the field is rational,
// quadratic, or a compositum of two quadratic fields with coprime
// discriminants, otherwise an enclosure via a primitive element
RootDiscResult log_root_disc_pair(const AlgebraicNumber& a, const AlgebraicNumber& b);

// the Liouville inequality −log δ_v(a,b) ≤ deg a·deg b·(h(a)+h(b)+log 2); a ≠ b
LiouvilleGap liouville_gap(const ProjPoint& a, const ProjPoint& b, const PlaceQ& v,
                           const QQ& precision);

// Eq.-(2)-style membership: min(|x|_v, |1−x|_v, |1/x|_v) ≥ η for every
// conjugate x of the affine value at every v ∈ sigma; 0 < η ≤ 1
bool in_compact_set(const ProjPoint& P, const std::vector<PlaceQ>& sigma, const QQ& eta);

// conductor of the support condition {0,1,∞} on `value`, with places taken in
// the field generated by q_field (must contain value; verified)
ConductorResult conductor_pullback(const std::pair<AlgebraicNumber, AlgebraicNumber>& q_field,
                                   const AlgebraicNumber& value);

}  // namespace abctk
