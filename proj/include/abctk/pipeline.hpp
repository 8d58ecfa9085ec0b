#pragma once

#include "abctk/belyi.hpp"
#include "abctk/cmp.hpp"
#include "abctk/heights.hpp"

#include <string>
#include <vector>

namespace abctk {

// ---- parameter selection ----

struct PipelineParams {
    int d = 1;
    QQ eps;
    std::vector<PlaceQ> sigma;
    long n = 0;   // 6 ceil(1/eps)
    long m = 0;   // |sigma| d n^2 + 1
    bool budget_ok = false;  // d n^2 <= 150 d / eps^2
};

PipelineParams parameters(int d, const QQ& eps, const std::vector<PlaceQ>& sigma);

// the contraction constant and the exact two sides of its defining inequality
struct EpsilonPrime {
    QQ value;      // (eps - eps^2) / (2 + 8 M^3)
    QQ lhs, rhs;   // (1+value)/(1-8 value M^3)  vs  (1-3/n)(1+eps)
    bool eq_holds = false;  // exact check; fails for every M >= 1 (recorded honestly)
    long n = 0;
};

EpsilonPrime epsilon_prime(const QQ& eps, const QQ& M);

// ---- separation constant from a disjoint family ----

struct KappaResult {
    QQ kappa;              // 0 < kappa <= 1
    long pairs_checked = 0;
    bool from_liouville = false;  // true when the Liouville floor was the binding bound
    std::vector<std::string> trace;
};

KappaResult kappa_from_family(const BelyiFamily& fam, const std::vector<PlaceQ>& sigma,
                              const QQ& precision);

// ---- index selection ----

struct SelectResult {
    long index = -1;        // first member whose value stays in the compact set
    long checked = 0;
    bool counting_ok = false;  // m > |sigma| d n^2 pigeonhole budget
    std::vector<std::string> trace;
};

SelectResult select_index(const std::vector<ProjPoint>& values,
                          const std::vector<PlaceQ>& sigma, const QQ& eta, int d, long n,
                          long m);

// ---- the two height identities on the curve ----

struct RHHeights {
    QIv h_R;  // 3 (1 - 1/n) h
    QIv h_K;  // (1 - 3/n) h
    bool identity_ok = false;  // h_R - h_K = 2 h, exact on endpoints
};

RHHeights rh_heights(int n, const QIv& h);

// ---- the constants ledger ----

struct ZEntry {
    std::string id;       // "Z1" .. "Z7"
    QQ value;             // certified rational upper value
    std::string formula;  // the closed form committed to
};

struct EffectivityConstants {
    QQ eta;    // = kappa
    QQ c;      // the contraction constant
    QQ C;      // Z6 + 2 Z7(n)
    QQ kappa;
    long n = 0, m = 0;
    std::vector<ZEntry> ledger;
    EpsilonPrime contraction;
    bool demo_mode = false;
    std::vector<std::string> notes;
};

EffectivityConstants compute_constants(int d, const QQ& eps, const std::vector<PlaceQ>& sigma,
                                       const QQ& M, const QQ& kappa, bool demo);

// the committed base function: Z(H) = 6 (H+1) log(2 (H+1)), as a certified
// rational upper value
QQ z_of(const QQ& H);

// ---- the reduction trace at a concrete point ----

struct ReductionStep {
    std::string label;
    QIv lhs, rhs;
    bool holds = false;          // certified: lhs.hi <= rhs.lo (or exact identity)
    bool unconditional = true;   // false when the step depends on the injected oracle
};

struct ReductionTrace {
    ProjPoint P;
    CurvePoint Q;                // deterministically chosen preimage
    QIv hP, dP, condP, dQ, cond_pullback;
    QIv h_R, h_K;
    long selected_index = -1;
    std::vector<ReductionStep> steps;
    bool all_unconditional_hold = false;
    bool demo_mode = false;
    std::vector<std::string> notes;
};

// Runs the reduction at P with a family of m maps on C_n; A_value is the
// injected value of the restricted-bound oracle (A identically that constant),
// used only in steps marked conditional.
ReductionTrace reduce_point(const ProjPoint& P, int n, int m,
                            const std::vector<PlaceQ>& sigma, const QQ& A_value, bool demo,
                            const QQ& precision);

std::string trace_to_json(const ReductionTrace& t);
std::string constants_to_json(const EffectivityConstants& c);

}  // namespace abctk
