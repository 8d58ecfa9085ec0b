#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abctk/pipeline.hpp"

#include <random>

using namespace abctk;

namespace {
const QQ kPrec(1, 100000);
const std::vector<PlaceQ> kTwoInf = {PlaceQ::prime(ZZ(2)), PlaceQ::infinite()};
const std::vector<PlaceQ> kInf = {PlaceQ::infinite()};
}  // namespace

TEST_CASE("parameter selection matches the hand-computed table") {
    PipelineParams p = parameters(1, QQ(1, 2), kTwoInf);
    CHECK(p.n == 12);
    CHECK(p.m == 289);
    CHECK(p.budget_ok);

    p = parameters(1, QQ(9, 10), kInf);
    CHECK(p.n == 12);
    CHECK(p.m == 145);

    p = parameters(2, QQ(1, 3), kInf);
    CHECK(p.n == 18);
    CHECK(p.m == 649);
    CHECK(p.budget_ok);
}

TEST_CASE("the fold-count bound 3/n < eps/2 over random epsilon") {
    std::mt19937 rng(20260823);
    std::uniform_int_distribution<long> num(1, 999), den(2, 1000);
    int tested = 0;
    while (tested < 300) {
        long a = num(rng), b = den(rng);
        if (a >= b) continue;
        QQ eps(a, b);
        PipelineParams p = parameters(1, eps, kInf);
        // strict unless 1/eps is an integer, where equality is achieved
        QQ lhs = QQ(3) / QQ(p.n);
        if (b % a == 0)
            CHECK(lhs <= eps / 2);
        else
            CHECK(lhs < eps / 2);
        CHECK(p.budget_ok);
        ++tested;
    }
}

TEST_CASE("contraction constant: exact value and honest failure of the inequality") {
    EpsilonPrime ep = epsilon_prime(QQ(1, 2), QQ(1));
    CHECK(ep.value == QQ(1, 40));
    CHECK(ep.n == 12);
    CHECK(ep.lhs == QQ(41, 32));
    CHECK(ep.rhs == QQ(9, 8));
    CHECK(!ep.eq_holds);  // 41/32 > 9/8: the stated contraction fails exactly
}

TEST_CASE("contraction inequality fails for every tested M") {
    for (long M : {1L, 2L, 5L, 10L, 100L}) {
        EpsilonPrime ep = epsilon_prime(QQ(1, 2), QQ(M));
        CHECK(!ep.eq_holds);
        CHECK(ep.value > 0);
        CHECK(ep.lhs > 1);
    }
    // the failure persists at small epsilon: the (1 - 3/n) loss dominates
    EpsilonPrime ep = epsilon_prime(QQ(1, 100), QQ(1));
    CHECK(!ep.eq_holds);
}

TEST_CASE("height identities on the curve") {
    QIv h(QQ(16094, 10000), QQ(16095, 10000));  // ~ log 5
    for (int n = 2; n <= 6; ++n) {
        RHHeights rh = rh_heights(n, h);
        CHECK(rh.identity_ok);
        CHECK(rh.h_R.lo == h.lo * QQ(3 * (n - 1), n));
        if (n == 2) CHECK(rh.h_K.hi < 0);  // (1 - 3/2) < 0
        if (n >= 4) CHECK(rh.h_K.lo > 0);
    }
}

TEST_CASE("separation constant from the three-member family") {
    BelyiFamily fam = disjoint_family(2, 3, 1, QQ(1, 2), 2);
    REQUIRE(fam.built == 3);
    KappaResult k = kappa_from_family(fam, kTwoInf, kPrec);
    CHECK(k.kappa > 0);
    CHECK(k.kappa <= 1);
    CHECK(k.pairs_checked > 0);
    // kappa is half a lower bound for the minimal distance, hence at most the
    // family's own infinite-place witness
    CHECK(2 * k.kappa <= fam.two_kappa);
}

TEST_CASE("singleton family yields the conventional separation") {
    BelyiFamily fam = disjoint_family(2, 1, 1, QQ(1, 2), 1);
    KappaResult k = kappa_from_family(fam, kInf, kPrec);
    CHECK(k.kappa == 1);
}

TEST_CASE("index selection re-verifies compact-set membership") {
    std::vector<ProjPoint> vals = {
        ProjPoint::affine(alg_from_rational(QQ(1, 1000))),  // too close to 0
        ProjPoint::affine(alg_from_rational(QQ(5))),        // well separated
    };
    SelectResult s = select_index(vals, kInf, QQ(1, 10), 1, 2, 5);
    CHECK(s.index == 1);
    CHECK(s.counting_ok);  // 5 > 1*1*4
    s = select_index(vals, kInf, QQ(1, 10), 1, 2, 4);
    CHECK(!s.counting_ok);  // 4 = |sigma| d n^2 exactly: budget not met
    // nothing admissible when eta exceeds all separations
    std::vector<ProjPoint> bad = {ProjPoint::affine(alg_from_rational(QQ(1, 1000)))};
    s = select_index(bad, kInf, QQ(1, 10), 1, 2, 5);
    CHECK(s.index == -1);
}

TEST_CASE("constants ledger carries the committed closed forms") {
    EffectivityConstants c = compute_constants(1, QQ(1, 2), kTwoInf, QQ(2), QQ(1, 8), true);
    CHECK(c.n == 12);
    CHECK(c.m == 289);
    CHECK(c.eta == QQ(1, 8));
    CHECK(c.c == epsilon_prime(QQ(1, 2), QQ(2)).value);
    REQUIRE(c.ledger.size() == 7);
    for (int k = 0; k < 6; ++k) {
        CHECK(c.ledger[(size_t)k].id == "Z" + std::to_string(k + 1));
        CHECK(c.ledger[(size_t)k].value == QQ(k + 1) * z_of(QQ(2)));
    }
    CHECK(c.ledger[6].id == "Z7");
    CHECK(c.ledger[6].value == z_of(QQ(3 * 144)));
    CHECK(c.C == QQ(6) * z_of(QQ(2)) + 2 * z_of(QQ(3 * 144)));
    // the honest-failure note about the contraction inequality is present
    bool noted = false;
    for (const auto& s : c.notes)
        if (s.find("fails exactly") != std::string::npos) noted = true;
    CHECK(noted);
    // Z is positive and monotone
    CHECK(z_of(QQ(1)) > 0);
    CHECK(z_of(QQ(5)) > z_of(QQ(2)));
}

TEST_CASE("reduction trace at the demonstration point") {
    ProjPoint P = parse_point("[1:5]");
    ReductionTrace t = reduce_point(P, 2, 3, kTwoInf, QQ(0), true, kPrec);
    CHECK(t.demo_mode);
    // hand-checked heights: h(P) = log 5, d(P) = 0, cond(P) = log 10,
    // d(Q) = (1/2) log 20 for Q = (sqrt 5, 2i)
    CHECK(t.hP.lo > QQ(16094, 10000));
    CHECK(t.hP.hi < QQ(16095, 10000));
    CHECK(t.dP.hi == 0);
    CHECK(t.condP.lo > QQ(23025, 10000));
    CHECK(t.condP.hi < QQ(23027, 10000));
    CHECK(t.dQ.lo > QQ(14978, 10000));
    CHECK(t.dQ.hi < QQ(14980, 10000));
    // cond_pullback = (1/2) log 10
    CHECK(t.cond_pullback.lo > QQ(11512, 10000));
    CHECK(t.cond_pullback.hi < QQ(11514, 10000));
    // every unconditional step certified
    CHECK(t.all_unconditional_hold);
    int uncond = 0, cond = 0;
    for (const auto& s : t.steps) {
        if (s.unconditional) {
            ++uncond;
            CHECK(s.holds);
        } else {
            ++cond;
        }
    }
    CHECK(uncond >= 5);
    CHECK(cond >= 1);
    // the counterfactual oracle is called out
    bool noted = false;
    for (const auto& s : t.notes)
        if (s.find("counterfactual") != std::string::npos) noted = true;
    CHECK(noted);
    // a family member is selected for this well-separated value
    CHECK(t.selected_index >= 0);
    // serialization
    std::string js = trace_to_json(t);
    CHECK(js.find("\"schema\": \"1\"") != std::string::npos);
    CHECK(js.find("reduction-trace") != std::string::npos);
}
