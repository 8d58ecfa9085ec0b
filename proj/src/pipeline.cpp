#include "abctk/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace abctk {

namespace {

using nlohmann::json;

ZZ ceil_inv(const QQ& eps) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("epsilon must lie in (0,1)");
    // ceil(den/num) for the reduced positive fraction
    ZZ num = eps.get_num(), den = eps.get_den();
    ZZ q = (den + num - 1) / num;
    return q;
}

}  // namespace

PipelineParams parameters(int d, const QQ& eps, const std::vector<PlaceQ>& sigma) {
    if (d < 1) throw std::invalid_argument("parameters: degree bound must be positive");
    PipelineParams p;
    p.d = d;
    p.eps = eps;
    p.sigma = sigma;
    ZZ c = ceil_inv(eps);
    p.n = 6 * c.get_si();
    p.m = (long)sigma.size() * d * p.n * p.n + 1;
    // d n^2 <= 150 d / eps^2, i.e. (n eps)^2 <= 150
    QQ lhs = QQ(p.n) * QQ(p.n) * eps * eps;
    p.budget_ok = lhs <= 150;
    return p;
}

EpsilonPrime epsilon_prime(const QQ& eps, const QQ& M) {
    EpsilonPrime out;
    ZZ c = ceil_inv(eps);
    out.n = 6 * c.get_si();
    QQ m3 = M * M * M;
    out.value = (eps - eps * eps) / (2 + 8 * m3);
    QQ den = 1 - 8 * out.value * m3;
    if (den <= 0) throw std::logic_error("epsilon_prime: contraction denominator vanished");
    out.lhs = (1 + out.value) / den;
    out.rhs = (1 - QQ(3) / QQ(out.n)) * (1 + eps);
    out.eq_holds = out.lhs < out.rhs;
    return out;
}

QQ z_of(const QQ& H) {
    QQ arg = 2 * (H + 1);
    return 6 * (H + 1) * log_enclosure(arg, 64).hi;
}

KappaResult kappa_from_family(const BelyiFamily& fam, const std::vector<PlaceQ>& sigma,
                              const QQ& precision) {
    KappaResult out;
    if (fam.built <= 1) {
        out.kappa = 1;
        out.trace.push_back("singleton family: kappa = 1 by convention");
        return out;
    }
    bool first = true;
    QQ best(1);
    for (size_t i = 0; i < fam.branch_images.size(); ++i)
        for (size_t j = i + 1; j < fam.branch_images.size(); ++j)
            for (const auto& a : fam.branch_images[i])
                for (const auto& b : fam.branch_images[j])
                    for (const auto& v : sigma) {
                        QIv direct = chordal_distance(a, b, v, precision);
                        QQ lower = direct.lo;
                        LiouvilleGap lg = liouville_gap(a, b, v, precision);
                        // Liouville floor: delta >= exp(-rhs)
                        QQ floor = exp_enclosure(-lg.rhs.hi, 64).lo;
                        bool lv = floor > lower;
                        if (lv) lower = floor;
                        if (first || lower < best) {
                            best = lower;
                            out.from_liouville = lv;
                        }
                        first = false;
                        ++out.pairs_checked;
                    }
    if (best <= 0) throw std::logic_error("kappa_from_family: vanishing separation");
    QQ half = best / 2;
    out.kappa = half < 1 ? half : QQ(1);
    out.trace.push_back("minimal cross-family separation over " +
                        std::to_string(out.pairs_checked) + " comparisons: kappa = " +
                        qq_to_string(out.kappa));
    return out;
}

SelectResult select_index(const std::vector<ProjPoint>& values,
                          const std::vector<PlaceQ>& sigma, const QQ& eta, int d, long n,
                          long m) {
    SelectResult out;
    out.counting_ok = m > (long)sigma.size() * d * n * n;
    if (!out.counting_ok)
        out.trace.push_back("pigeonhole budget not met: m = " + std::to_string(m) +
                            " does not exceed |sigma| d n^2");
    for (size_t i = 0; i < values.size(); ++i) {
        ++out.checked;
        if (in_compact_set(values[i], sigma, eta)) {
            out.index = (long)i;
            out.trace.push_back("member " + std::to_string(i) +
                                " stays eta-separated from {0,1,inf} at all places");
            return out;
        }
    }
    out.trace.push_back("no member admitted; all values approach {0,1,inf}");
    return out;
}

RHHeights rh_heights(int n, const QIv& h) {
    if (n < 2) throw std::invalid_argument("rh_heights: need n >= 2");
    RHHeights out;
    out.h_R = h * QQ(3 * (n - 1), n);
    out.h_K = h * QQ(n - 3, n);
    // the scalar identity 3(1-1/n) - (1-3/n) = 2, checked exactly; the
    // interval difference can only widen around the scaled image of h
    QIv diff = out.h_R - out.h_K;
    QIv twice = h * QQ(2);
    bool scalars = QQ(3 * (n - 1), n) - QQ(n - 3, n) == 2;
    out.identity_ok = scalars && diff.lo <= twice.lo && twice.hi <= diff.hi;
    return out;
}

EffectivityConstants compute_constants(int d, const QQ& eps, const std::vector<PlaceQ>& sigma,
                                       const QQ& M, const QQ& kappa, bool demo) {
    EffectivityConstants out;
    PipelineParams p = parameters(d, eps, sigma);
    out.n = p.n;
    out.m = p.m;
    out.demo_mode = demo;
    out.kappa = kappa;
    out.eta = kappa;
    out.contraction = epsilon_prime(eps, M);
    out.c = out.contraction.value;
    QQ zm = z_of(M);
    const char* base = "k * Z(M), Z(H) = 6 (H+1) log(2 (H+1))";
    for (int k = 1; k <= 6; ++k)
        out.ledger.push_back({"Z" + std::to_string(k), QQ(k) * zm, base});
    QQ z7 = z_of(QQ(3) * QQ(out.n) * QQ(out.n));
    out.ledger.push_back({"Z7", z7, "Z(3 n^2)"});
    out.C = QQ(6) * zm + 2 * z7;
    if (!out.contraction.eq_holds)
        out.notes.push_back(
            "contraction inequality fails exactly as stated: lhs = " +
            qq_to_string(out.contraction.lhs) + " vs rhs = " + qq_to_string(out.contraction.rhs) +
            "; recorded honestly, the downstream constants remain formal");
    if (demo)
        out.notes.push_back("demo mode: family size and oracle are illustrative, not certified");
    return out;
}

ReductionTrace reduce_point(const ProjPoint& P, int n, int m,
                            const std::vector<PlaceQ>& sigma, const QQ& A_value, bool demo,
                            const QQ& precision) {
    if (P.is_infinity()) throw std::invalid_argument("reduce_point: P must be affine");
    ReductionTrace t;
    t.P = P;
    t.demo_mode = demo;
    AlgebraicNumber alpha = alg_mul(alg_inv(P.x0), P.x1);
    if (alg_is_zero(alpha) || alg_is_one(alpha))
        throw std::invalid_argument("reduce_point: P must avoid {0,1,inf}");

    // deterministic preimage on the curve: x^n = alpha
    ZPoly xn = ZPoly::monomial(ZZ(1), (size_t)n);
    ZPoly u = squarefree_part(alpha.minpoly.compose(xn));
    std::vector<CurvePoint> fiber = fiber_points(n, u);
    if (fiber.empty()) throw std::logic_error("reduce_point: empty fiber");
    std::sort(fiber.begin(), fiber.end(), [](const CurvePoint& a, const CurvePoint& b) {
        return curve_point_to_string(a) < curve_point_to_string(b);
    });
    // keep only preimages of alpha itself (the composed polynomial also covers
    // the conjugates of alpha)
    std::vector<CurvePoint> pre;
    for (const auto& Q : fiber) {
        AlgebraicNumber pin = Q.x0;
        for (int k = 1; k < n; ++k) pin = alg_mul(pin, Q.x0);
        if (alg_equal(pin, alpha)) pre.push_back(Q);
    }
    if (pre.empty()) throw std::logic_error("reduce_point: no preimage matches the value");
    t.Q = pre.front();
    t.notes.push_back("preimage chosen as the lexicographically smallest serialized point");

    t.hP = height_point(P, precision);
    t.dP = log_root_disc(P).value;
    t.condP = conductor(P).value;
    t.dQ = log_root_disc_pair(t.Q.x0, t.Q.y0).value;
    t.cond_pullback = conductor_pullback({t.Q.x0, t.Q.y0}, alpha).value;

    RHHeights rh = rh_heights(n, t.hP);
    t.h_R = rh.h_R;
    t.h_K = rh.h_K;

    auto push_identity = [&](const std::string& label, const QIv& lhs, const QIv& rhs,
                             bool holds) {
        t.steps.push_back({label, lhs, rhs, holds, true});
    };
    push_identity("ramification height h_R = 3(1 - 1/n) h(P)", rh.h_R,
                  t.hP * QQ(3 * (n - 1), n), rh.identity_ok);
    push_identity("canonical height h_K = (1 - 3/n) h(P), h_R - h_K = 2 h(P)", rh.h_K,
                  t.hP * QQ(n - 3, n), rh.identity_ok);

    auto push_bound = [&](const std::string& label, const QIv& lhs, const QIv& rhs,
                          bool unconditional) {
        bool holds = lhs.hi <= rhs.lo;
        t.steps.push_back({label, lhs, rhs, holds, unconditional});
    };
    QIv lower_lhs = t.dP + t.condP;
    QIv lower_rhs = t.dQ + t.cond_pullback;
    push_bound("pullback lower bound d(P) + cond(P) <= d(Q) + cond_pullback(Q)", lower_lhs,
               lower_rhs, true);

    // the family's complexity feeds the committed Z forms
    BelyiFamily fam = disjoint_family(n, m, 1, QQ(1, 2), (int)sigma.size());
    double Md = 1.0;
    for (const auto& c : fam.maps) Md = std::max(Md, ff_complexity(c.curve_map).H);
    QQ Mq(Md);
    QQ z7 = z_of(QQ(3) * QQ(n) * QQ(n));
    push_bound("conductor comparison d(Q) + cond_pullback(Q) <= d(P) + cond(P) + Z7(n)",
               lower_rhs, lower_lhs + QIv(z7), true);

    QIv log2 = log_enclosure(QQ(2), 64);
    push_bound("conductor-height bound cond(P) <= 3 h(P) + log 2 + Z1", t.condP,
               t.hP * QQ(3) + log2 + QIv(z_of(Mq)), true);

    // member selection over the family
    KappaResult kp = kappa_from_family(fam, sigma, precision);
    std::vector<ProjPoint> values;
    for (const auto& c : fam.maps) values.push_back(ff_evaluate(c.curve_map, t.Q));
    SelectResult sel =
        select_index(values, sigma, kp.kappa, alpha.degree(), n, m);
    t.selected_index = sel.index;
    for (auto& s : sel.trace) t.notes.push_back(s);
    if (!sel.counting_ok)
        t.notes.push_back("demo family below the pigeonhole threshold; selection is "
                          "illustrative only");

    // conditional outer bound, using the injected oracle value
    QQ eps(1, 2);
    QIv outer_rhs = t.dQ * (1 + eps) + QIv(2 * A_value) + QIv(QQ(6) * z_of(Mq) + 2 * z7);
    push_bound("outer bound h(P) <= (1 + eps) d(Q) + 2 A + Z6 + 2 Z7  [oracle A]", t.hP,
               outer_rhs, false);
    if (A_value == 0)
        t.notes.push_back(
            "oracle A taken identically 0: a counterfactual placeholder, not a certified "
            "restricted bound");

    t.all_unconditional_hold = true;
    for (const auto& s : t.steps)
        if (s.unconditional && !s.holds) t.all_unconditional_hold = false;
    return t;
}

namespace {

json iv_json(const QIv& v) {
    return json::array({qq_decimal(v.lo, 12, false), qq_decimal(v.hi, 12, true)});
}

}  // namespace

std::string trace_to_json(const ReductionTrace& t) {
    json j;
    j["schema"] = "1";
    j["type"] = "reduction-trace";
    j["P"] = point_to_string(t.P);
    j["Q"] = curve_point_to_string(t.Q);
    j["h_P"] = iv_json(t.hP);
    j["d_P"] = iv_json(t.dP);
    j["cond_P"] = iv_json(t.condP);
    j["d_Q"] = iv_json(t.dQ);
    j["cond_pullback_Q"] = iv_json(t.cond_pullback);
    j["h_R"] = iv_json(t.h_R);
    j["h_K"] = iv_json(t.h_K);
    j["selected_index"] = t.selected_index;
    json steps = json::array();
    for (const auto& s : t.steps) {
        steps.push_back({{"label", s.label},
                         {"lhs", iv_json(s.lhs)},
                         {"rhs", iv_json(s.rhs)},
                         {"holds", s.holds},
                         {"unconditional", s.unconditional}});
    }
    j["steps"] = steps;
    j["all_unconditional_hold"] = t.all_unconditional_hold;
    j["demo_mode"] = t.demo_mode;
    j["notes"] = t.notes;
    return j.dump(2);
}

std::string constants_to_json(const EffectivityConstants& c) {
    json j;
    j["schema"] = "1";
    j["type"] = "effectivity-constants";
    j["n"] = c.n;
    j["m"] = c.m;
    j["eta"] = qq_to_string(c.eta);
    j["kappa"] = qq_to_string(c.kappa);
    j["c"] = qq_to_string(c.c);
    j["C"] = qq_to_string(c.C);
    j["contraction"] = {{"value", qq_to_string(c.contraction.value)},
                        {"lhs", qq_to_string(c.contraction.lhs)},
                        {"rhs", qq_to_string(c.contraction.rhs)},
                        {"holds", c.contraction.eq_holds}};
    json ledger = json::array();
    for (const auto& z : c.ledger)
        ledger.push_back({{"id", z.id}, {"value", qq_to_string(z.value)}, {"formula", z.formula}});
    j["ledger"] = ledger;
    j["demo_mode"] = c.demo_mode;
    j["notes"] = c.notes;
    return j.dump(2);
}

}  // namespace abctk
