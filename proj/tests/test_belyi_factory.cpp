#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abctk/belyi.hpp"

using namespace abctk;

namespace {

ZPoly P(const std::string& s) {
    auto p = parse_poly(s);
    REQUIRE(p.has_value());
    return *p;
}

const QQ kPrec(1, 1000000);

bool value_in_013(const ProjPoint& w) {
    if (w.is_infinity()) return true;
    AlgebraicNumber a = alg_mul(alg_inv(w.x0), w.x1);
    return a.is_rational() && (a.rational_value() == 0 || a.rational_value() == 1);
}

RationalMapP1 lambda_map(long m, long l) {
    ZZ b(m + l), a(m);
    ZPoly zm = ZPoly::monomial(ZZ(1), (size_t)m);
    ZPoly oml = ZPoly(std::vector<ZZ>{1, -1}).pow((unsigned long)l);
    ZZ cnum = zpow(b, (unsigned long)(m + l));
    ZZ cden = zpow(a, (unsigned long)m) * zpow(ZZ(l), (unsigned long)l);
    return p1_map(zm * oml * cnum, ZPoly(cden));
}

}  // namespace

TEST_CASE("p1 map normalization and composition") {
    RationalMapP1 f = p1_map(P("2*x^2 - 2"), P("2*x - 2"));
    // common factor x-1 and content 2 removed
    CHECK(f.num == P("x + 1"));
    CHECK(f.den == P("1"));

    RationalMapP1 g = p1_map(P("x^2"), P("x - 3"));
    RationalMapP1 h = p1_map(P("x + 1"), P("2*x - 1"));
    RationalMapP1 gh = p1_compose(g, h);
    // degrees multiply for generic compositions
    CHECK(gh.degree() == g.degree() * h.degree());
    // spot value: h(2) = 1, g(1) = -1/2
    P1Rat w = p1_eval_rat(gh, P1Rat::of(QQ(2)));
    REQUIRE(!w.inf);
    CHECK(w.v == QQ(-1, 2));
    // round trip through the string form
    auto back = parse_p1_map(p1_map_to_string(gh));
    REQUIRE(back.has_value());
    CHECK(back->num == gh.num);
    CHECK(back->den == gh.den);
}

TEST_CASE("rational evaluation handles infinity correctly") {
    RationalMapP1 f = p1_map(P("x^2 + 1"), P("x - 1"));
    CHECK(p1_eval_rat(f, P1Rat::infinity()).inf);
    CHECK(p1_eval_rat(f, P1Rat::of(QQ(1))).inf);
    RationalMapP1 g = p1_map(P("x"), P("x^2 + 1"));
    P1Rat w = p1_eval_rat(g, P1Rat::infinity());
    REQUIRE(!w.inf);
    CHECK(w.v == 0);
    RationalMapP1 m = p1_map(P("2*x + 1"), P("3*x - 1"));
    w = p1_eval_rat(m, P1Rat::infinity());
    REQUIRE(!w.inf);
    CHECK(w.v == QQ(2, 3));
}

TEST_CASE("fold maps z^m (1-z)^l: critical values in {0,1,inf}, designated point to 1") {
    for (long m = 1; m <= 4; ++m)
        for (long l = 1; l <= 4; ++l) {
            RationalMapP1 lam = lambda_map(m, l);
            CAPTURE(m);
            CAPTURE(l);
            CHECK(lam.degree() == m + l);
            CHECK(p1_is_belyi(lam));
            P1CriticalData cv = p1_critical_values(lam, kPrec);
            CHECK(cv.all_in_013);
            // the interior critical point m/(m+l) maps exactly to 1
            P1Rat w = p1_eval_rat(lam, P1Rat::of(QQ(m) / QQ(m + l)));
            REQUIRE(!w.inf);
            CHECK(w.v == 1);
        }
}

TEST_CASE("critical value analysis flags non-admissible maps") {
    // z^2 + z ramifies over -1/4, not in {0,1,inf}
    RationalMapP1 f = p1_map(P("x^2 + x"), P("1"));
    CHECK(!p1_is_belyi(f));
    P1CriticalData cv = p1_critical_values(f, kPrec);
    CHECK(!cv.all_in_013);
    bool found = false;
    for (const auto& p : cv.values)
        if (!p.is_infinity()) {
            AlgebraicNumber a = alg_mul(alg_inv(p.x0), p.x1);
            if (a.is_rational() && a.rational_value() == QQ(-1, 4)) found = true;
        }
    CHECK(found);
    // Moebius maps have no critical values at all
    P1CriticalData mv = p1_critical_values(p1_map(P("x + 2"), P("x - 1")), kPrec);
    CHECK(mv.all_in_013);
    CHECK(mv.values.empty());
}

TEST_CASE("belyi engine: single rational branch value 2") {
    BelyiP1Result r = belyi_p1({ProjPoint::affine(alg_from_rational(QQ(2)))});
    REQUIRE(r.ok);
    CHECK(p1_is_belyi(r.g));
    // designated value g(2) lands in {0,1,inf}
    CHECK(p1_eval_rat(r.g, P1Rat::of(QQ(2))).in_013());
    // tracked value g(0) stays outside
    CHECK(!r.track.in_013());
    CHECK(r.track == p1_eval_rat(r.g, P1Rat::of(QQ(0))));
    // hand-checked minimal construction: translate by 2, invert, fold 1/4
    CHECK(r.degree == 4);
    CHECK(r.track == P1Rat::of(QQ(16, 27)));
}

TEST_CASE("belyi engine: branch value 1/2") {
    BelyiP1Result r = belyi_p1({ProjPoint::affine(alg_from_rational(QQ(1, 2)))});
    REQUIRE(r.ok);
    CHECK(p1_is_belyi(r.g));
    CHECK(p1_eval_rat(r.g, P1Rat::of(QQ(1, 2))).in_013());
    CHECK(!r.track.in_013());
    // hand-checked: translate by 2, invert, fold 2/5
    CHECK(r.degree == 5);
    CHECK(r.track == P1Rat::of(QQ(3125, 3456)));
}

TEST_CASE("belyi engine: quadratic pair sqrt(2)") {
    BelyiP1Result r = belyi_p1_factors({P("x^2 - 2")}, false);
    REQUIRE(r.ok);
    CHECK(p1_is_belyi(r.g));
    CHECK(!r.track.in_013());
    // both conjugate branch values land in {0,1,inf}
    for (auto& a : roots_of(P("x^2 - 2"), kPrec)) {
        ProjPoint w = p1_eval(r.g, ProjPoint::affine(a), kPrec);
        CHECK(value_in_013(w));
    }
    // quotient collapse (degree 2) then a fold of the collapsed value
    CHECK(r.degree % 2 == 0);
}

TEST_CASE("belyi engine: infinity alone forces only a translation") {
    BelyiP1Result r = belyi_p1_factors({}, true);
    REQUIRE(r.ok);
    CHECK(r.degree == 1);
    CHECK(p1_eval_rat(r.g, P1Rat::infinity()).in_013());
    CHECK(!r.track.in_013());
}

TEST_CASE("belyi engine: golden ratio pair with infinity") {
    BelyiP1Result r = belyi_p1_factors({P("x^2 - x - 1")}, true);
    REQUIRE(r.ok);
    CHECK(p1_is_belyi(r.g));
    CHECK(!r.track.in_013());
    CHECK(p1_eval_rat(r.g, P1Rat::infinity()).in_013());
    for (auto& a : roots_of(P("x^2 - x - 1"), kPrec)) {
        ProjPoint w = p1_eval(r.g, ProjPoint::affine(a), kPrec);
        CHECK(value_in_013(w));
    }
}

TEST_CASE("belyi engine: two rational values fold one by one") {
    BelyiP1Result r = belyi_p1_factors({P("x + 1"), P("x - 3")}, false);
    REQUIRE(r.ok);
    CHECK(p1_is_belyi(r.g));
    CHECK(!r.track.in_013());
    CHECK(p1_eval_rat(r.g, P1Rat::of(QQ(-1))).in_013());
    CHECK(p1_eval_rat(r.g, P1Rat::of(QQ(3))).in_013());
    // each fold multiplies the degree, so the result exceeds a single fold
    CHECK(r.degree > 4);
}

TEST_CASE("belyi engine: a generic triple exhausts the ceiling as a typed failure") {
    // denominators explode under iterated folds; the engine must fail fast
    // with the ceiling report instead of diverging
    BelyiP1Result r = belyi_p1_factors({P("x - 3"), P("2*x - 5"), P("x + 7")}, false);
    if (!r.ok) {
        CHECK(!r.failure_reason.empty());
    } else {
        CHECK(p1_is_belyi(r.g));
        CHECK(!r.track.in_013());
    }
}

TEST_CASE("belyi engine: resource ceiling yields a typed failure with a trace") {
    BelyiLimits lim;
    lim.max_degree = 3;  // too small for any fold past the set {2}
    BelyiP1Result r = belyi_p1_factors({P("x - 2")}, false, lim);
    CHECK(!r.ok);
    CHECK(!r.failure_reason.empty());
    CHECK(!r.pending.empty());
}

TEST_CASE("choose_shift_a avoids the slope ratios of the fiber") {
    // empty fiber: the smallest admissible shift is 2
    CHECK(choose_shift_a(2, {}) == 2);
    // fiber points over x^2 = 4/5 on C_2 include (2/sqrt5, 1/sqrt5): y/x = 1/2,
    // never an integer, so a = 2 still works
    auto fib = fiber_points(2, P("5*x^2 - 4"));
    CHECK(choose_shift_a(2, fib) == 2);
    // a synthetic point with y/x = 2 forces a = 3: x = 1/sqrt5, y = 2/sqrt5
    auto fib2 = fiber_points(2, P("5*x^2 - 1"));
    bool has_ratio_2 = false;
    for (const auto& Q : fib2) {
        AlgebraicNumber ratio = alg_mul(Q.y0, alg_inv(Q.x0));
        if (ratio.is_rational() && ratio.rational_value() == 2) has_ratio_2 = true;
    }
    REQUIRE(has_ratio_2);
    CHECK(choose_shift_a(2, fib2) == 3);
}

TEST_CASE("build_F on the base set {0,1,inf}") {
    BuildFResult r = build_F(2, {});
    CHECK(r.exponent == 3);
    CHECK(r.shift_a == 2);
    // the fiber over {0,1,inf} on C_2: 2+2+2 points, each a simple zero
    CHECK(r.fiber_size == 6);
    CHECK(ff_map_degree(r.F) == 6);
    CHECK(r.zero_excluded);
    // the critical value set contains infinity and no rational value
    CHECK(r.infinity_critical);
    for (const auto& f : r.critical_value_factors) CHECK(f.degree() >= 2);
}

TEST_CASE("build_F with an extra rational base point") {
    std::vector<ProjPoint> S = {ProjPoint::affine(alg_from_rational(QQ(1, 2)))};
    BuildFResult r = build_F(2, S);
    // S' = {1/2}: exponent 3 + 2*1 = 5
    CHECK(r.exponent == 5);
    // fiber gains the 4 points over 1/2
    CHECK(r.fiber_size == 10);
    CHECK(ff_map_degree(r.F) == r.fiber_size);
    CHECK(r.zero_excluded);
}

TEST_CASE("noncritical construction reports a typed failure at desk scale") {
    std::vector<ProjPoint> S = {ProjPoint::affine(alg_from_rational(QQ(1, 2)))};
    NoncriticalOutcome out = noncritical_belyi(2, S, 1, 10.0);
    if (out.ok) {
        CHECK(out.cert.valid());
        CHECK(verify_certificate(out.cert, kPrec));
    } else {
        CHECK(!out.fail.reason.empty());
        CHECK(!out.fail.trace.empty());
        REQUIRE(out.fail.F_part.has_value());
        CHECK(out.fail.F_part->zero_excluded);
    }
}

TEST_CASE("disjoint family of three maps on C_2") {
    BelyiFamily fam = disjoint_family(2, 3, 1, QQ(1, 2), 2);
    REQUIRE(fam.built == 3);
    CHECK(fam.disjoint);
    CHECK(fam.two_kappa > 0);
    REQUIRE(fam.maps.size() == 3);
    // first member is the distinguished degree-n^2 map
    CHECK(fam.maps[0].degree == 4);
    for (const auto& c : fam.maps) {
        CHECK(c.clause_unramified);
        CHECK(c.valid());
    }
    // pairwise branch disjointness re-checked here via exact resultants
    REQUIRE(fam.branch_eliminants.size() == 3);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = i + 1; j < 3; ++j)
            CHECK(resultant(fam.branch_eliminants[i], fam.branch_eliminants[j]) != 0);
    // serialization carries the witness
    std::string js = family_to_json(fam);
    CHECK(js.find("\"disjoint\": true") != std::string::npos);
}

TEST_CASE("disjoint family members restrict to genuine Belyi maps") {
    BelyiFamily fam = disjoint_family(2, 3, 1, QQ(1, 2), 2);
    REQUIRE(fam.built == 3);
    for (size_t i = 1; i < fam.maps.size(); ++i) {
        const auto& c = fam.maps[(size_t)i];
        CHECK(p1_is_belyi(c.p1_part));
        P1CriticalData cv = p1_critical_values(c.p1_part, kPrec);
        CHECK(cv.all_in_013);
        // degree on the curve equals the degree of the u-line model
        CHECK(c.degree == c.p1_part.degree());
    }
}

TEST_CASE("family of five stays pairwise disjoint") {
    BelyiFamily fam = disjoint_family(2, 5, 1, QQ(1, 2), 2);
    REQUIRE(fam.built == 5);
    CHECK(fam.disjoint);
    for (size_t i = 0; i < fam.branch_eliminants.size(); ++i)
        for (size_t j = i + 1; j < fam.branch_eliminants.size(); ++j)
            CHECK(resultant(fam.branch_eliminants[i], fam.branch_eliminants[j]) != 0);
}

TEST_CASE("certificate serialization is schema-tagged and re-verifiable") {
    BelyiFamily fam = disjoint_family(2, 2, 1, QQ(1, 2), 2);
    REQUIRE(fam.built == 2);
    std::string js = certificate_to_json(fam.maps[1]);
    CHECK(js.find("\"schema\": \"1\"") != std::string::npos);
    CHECK(js.find("belyi-certificate") != std::string::npos);
    CHECK(verify_certificate(fam.maps[1], kPrec));
}
