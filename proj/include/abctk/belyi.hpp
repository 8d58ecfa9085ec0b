#pragma once

#include "abctk/fermat.hpp"
#include "abctk/heights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abctk {

// ---- rational self-maps of P^1 over Q ----

// coprime integer polynomials num/den, common integer content 1, den nonzero
// with positive leading coefficient
struct RationalMapP1 {
    ZPoly num;
    ZPoly den{ZZ(1)};

    int degree() const { return std::max(num.degree(), den.degree()); }
    bool is_constant() const { return degree() <= 0; }
};

RationalMapP1 p1_map(ZPoly num, ZPoly den);
RationalMapP1 p1_identity();
RationalMapP1 p1_compose(const RationalMapP1& f, const RationalMapP1& g);  // f(g(z))
std::string p1_map_to_string(const RationalMapP1& f);
std::optional<RationalMapP1> parse_p1_map(const std::string& s);

// rational point of P^1 (affine value or infinity)
struct P1Rat {
    bool inf = false;
    QQ v;

    static P1Rat infinity() { return {true, QQ(0)}; }
    static P1Rat of(const QQ& x) { return {false, x}; }
    bool operator==(const P1Rat& o) const { return inf == o.inf && (inf || v == o.v); }
    bool in_013() const { return inf || v == 0 || v == 1; }
    std::string str() const;
};

P1Rat p1_eval_rat(const RationalMapP1& f, const P1Rat& t);
ProjPoint p1_eval(const RationalMapP1& f, const ProjPoint& P, const QQ& precision);

// exact critical-value analysis of a non-constant map
struct P1CriticalData {
    std::vector<ProjPoint> values;  // distinct critical values
    bool all_in_013 = false;        // critical values ⊆ {0,1,∞}
};
P1CriticalData p1_critical_values(const RationalMapP1& f, const QQ& precision);

// fast exact check: critical values ⊆ {0,1,∞}
bool p1_is_belyi(const RationalMapP1& f);

// ---- the P^1 Belyi engine ----

struct BelyiLimits {
    long max_degree = 512;       // composite-degree ceiling (also caps fold exponents)
    long max_coeff_bits = 4096;  // per-coefficient size ceiling
    int max_stages = 64;
};

struct BelyiStage {
    std::string kind;  // "translate" | "minpoly" | "collapse" | "moebius" | "lambda"
    std::string text;
};

struct BelyiP1Result {
    bool ok = false;
    RationalMapP1 g;
    long degree = 0;
    double log_height = 0;  // max log|coefficient| of g
    P1Rat track;            // g(0)
    std::vector<BelyiStage> stages;      // construction trace (partial on failure)
    std::vector<ZPoly> pending;          // unresolved branch-value minimal polynomials
    std::string failure_reason;          // nonempty iff !ok
};

// Build g with: g unramified outside g^{-1}{0,1,∞}; g(T) ⊆ {0,1,∞};
// g(0) ∉ {0,1,∞}; achieved degree/height recorded.  T is given as a
// Galois-stable set of points.  A typed failure (ok = false, reason, partial
// trace) is returned when the configured resource ceiling is exceeded.
BelyiP1Result belyi_p1(const std::vector<ProjPoint>& T, const BelyiLimits& lim = {});

// same engine on a set given by irreducible minimal polynomials (+ ∞ flag)
BelyiP1Result belyi_p1_factors(const std::vector<ZPoly>& factors, bool include_infinity,
                               const BelyiLimits& lim = {});

// ---- Belyi maps on the Fermat curves ----

// smallest integer a ≥ 2 with y(P)/x(P) ≠ a for all P ∈ π^{-1}(S′)
int choose_shift_a(int n, const std::vector<CurvePoint>& s_prime_fiber);

struct BuildFResult {
    FFElement F;            // (a·x − y)^{−3−n|S′|} · x · y · ∏_{α∈S′}(π − α)
    int n = 2;
    int shift_a = 2;
    int exponent = 3;        // 3 + n·|S′|
    long fiber_size = 0;     // |π^{-1}(S)|, each a simple zero of F (verified)
    std::vector<ZPoly> critical_value_factors;  // minimal polynomials of T ∖ {∞}
    bool infinity_critical = false;             // ∞ ∈ T
    bool zero_excluded = false;                 // verified: 0 ∉ T
    std::vector<std::string> trace;
};

// S given as points of P^1; enlarged internally to contain {0,1,∞} and to be
// Galois-stable.  The returned F sends π^{-1}(S) to 0 with multiplicity one at
// every point and is unramified over 0; its critical value set T excludes 0.
BuildFResult build_F(int n, const std::vector<ProjPoint>& S);

struct BelyiCertificate {
    bool on_curve = false;
    FFElement curve_map;       // valid when on_curve
    RationalMapP1 p1_part;     // the outer P^1 factor g (or the whole map)
    FFElement inner_F;         // valid when on_curve
    long degree = 0;
    std::vector<ProjPoint> critical_values;  // re-derived from scratch
    bool clause_unramified = false;   // unramified outside the {0,1,∞}-fibre
    bool clause_image = false;        // image condition on the designated set
    bool clause_noncritical = false;  // tracked value avoids {0,1,∞}
    bool clause_bounds = false;       // degree/height bounds recomputed
    double bound_B = 0;               // achieved bound (implementation-specific)
    std::vector<QIv> branch_points_heights;
    std::vector<std::string> trace;

    bool valid() const {
        return clause_unramified && clause_image && clause_noncritical && clause_bounds;
    }
};

std::string certificate_to_json(const BelyiCertificate& c);

struct NoncriticalFailure {
    std::string reason;
    std::vector<std::string> trace;   // construction trace, incl. partial stages
    std::optional<BuildFResult> F_part;  // the completed inner construction
};

struct NoncriticalOutcome {
    bool ok = false;
    BelyiCertificate cert;     // valid when ok
    NoncriticalFailure fail;   // valid when !ok
};

// f = g ∘ F with full certificate; typed resource failure otherwise
NoncriticalOutcome noncritical_belyi(int n, const std::vector<ProjPoint>& S, int d,
                                     double H, const BelyiLimits& lim = {});

// re-derive every clause of a certificate from scratch
bool verify_certificate(const BelyiCertificate& c, const QQ& precision);

struct BelyiFamily {
    int n = 2;
    std::vector<BelyiCertificate> maps;       // f₁ = π, f₂, …
    std::vector<std::vector<ProjPoint>> branch_images;  // π(f_i^{-1}{0,1,∞})
    std::vector<ZPoly> branch_eliminants;     // defining polynomials of the above
    QQ two_kappa{0};                          // pairwise chordal-distance lower bound
    bool disjoint = false;                    // property: branch images pairwise disjoint
    long requested = 0, built = 0;            // partial families carry built < requested
    std::vector<std::string> trace;
};

// family of pairwise branch-disjoint Belyi maps on C_n with f₁ = π; partial
// family (built < m) when the construction hits a resource limit
BelyiFamily disjoint_family(int n, int m, int d, const QQ& eps, int sigma_size,
                            const BelyiLimits& lim = {});

std::string family_to_json(const BelyiFamily& fam);

}  // namespace abctk
