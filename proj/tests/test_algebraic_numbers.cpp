#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "abctk/alg.hpp"
#include "abctk/fp.hpp"

#include <random>

using namespace abctk;

static ZPoly P(const std::string& s) {
    auto p = parse_poly(s);
    REQUIRE(p.has_value());
    return *p;
}

static QQ EPS(long bits) { return qpow(QQ(1, 2), bits); }

// rational bounds on log 2
static const QQ LOG2_LO(62, 90), LOG2_HI(944, 1361);

TEST_CASE("root isolation") {
    auto r = roots_of(P("x^2 - 2"), QQ(1, 1000000));
    REQUIRE(r.size() == 2);
    // boxes around ±1.41421356..., sorted by real part
    CHECK(r[0].box.re.hi < QQ(-14142, 10000));
    CHECK(r[0].box.re.lo > QQ(-14143, 10000));
    CHECK(r[1].box.re.lo > QQ(14142, 10000));
    CHECK(r[1].box.re.hi < QQ(14143, 10000));
    CHECK(r[0].box.width() <= QQ(1, 1000000));
    CHECK(r[0].is_real());
    CHECK(r[1].is_real());

    auto lin = roots_of(P("x - 3"), QQ(1, 4));
    REQUIRE(lin.size() == 1);
    CHECK(lin[0].is_rational());
    CHECK(lin[0].rational_value() == 3);

    auto ii = roots_of(P("x^2 + 1"), QQ(1, 1024));
    REQUIRE(ii.size() == 2);
    CHECK(!ii[0].is_real());
    CHECK(!ii[1].is_real());
    // symmetric across the real axis
    CHECK(ii[0].box.im.hi < 0);
    CHECK(ii[1].box.im.lo > 0);
    CHECK(ii[0].box.re.contains(QQ(0)));

    // non-squarefree and reducible input
    auto m = roots_of(P("x^3 - x^2"), QQ(1, 64));
    REQUIRE(m.size() == 2);
    CHECK(m[0].rational_value() == 0);
    CHECK(m[1].rational_value() == 1);
}

TEST_CASE("refinement and equality") {
    auto r = roots_of(P("x^2 - 2"), QQ(1, 8));
    AlgebraicNumber s2 = r[1];
    AlgebraicNumber fine = alg_refine(s2, EPS(60));
    CHECK(fine.box.width() <= EPS(60));
    CHECK(alg_equal(s2, fine));
    CHECK(!alg_equal(r[0], r[1]));
    CHECK(alg_equal(alg_from_rational(QQ(5, 3)), alg_from_rational(QQ(5, 3))));
    CHECK(!alg_equal(alg_from_rational(QQ(5, 3)), alg_from_rational(QQ(2, 3))));
    CHECK(alg_is_zero(alg_from_rational(QQ(0))));
    CHECK(alg_is_one(alg_from_rational(QQ(1))));
}

TEST_CASE("algebraic arithmetic") {
    auto s2 = roots_of(P("x^2 - 2"), QQ(1, 1024))[1];  // +√2
    auto s3 = roots_of(P("x^2 - 3"), QQ(1, 1024))[1];  // +√3

    AlgebraicNumber sum = alg_add(s2, s3);
    CHECK(sum.minpoly == P("x^4 - 10*x^2 + 1"));
    CHECK(sum.box.re.lo > QQ(3146, 1000));  // √2+√3 ≈ 3.14626
    CHECK(sum.box.re.hi < QQ(3147, 1000));

    // α + 0 = α
    CHECK(alg_equal(alg_add(s2, alg_from_rational(QQ(0))), s2));

    // (1+i)(1−i) = 2
    auto roots_i = roots_of(P("x^2 + 1"), QQ(1, 1024));
    AlgebraicNumber i_pos = roots_i[1];
    AlgebraicNumber one = alg_from_rational(QQ(1));
    AlgebraicNumber a = alg_add(one, i_pos);       // 1+i
    AlgebraicNumber b = alg_sub(one, i_pos);       // 1−i
    AlgebraicNumber prod = alg_mul(a, b);
    CHECK(prod.is_rational());
    CHECK(prod.rational_value() == 2);

    // √2·√3 = √6
    AlgebraicNumber s6 = alg_mul(s2, s3);
    CHECK(s6.minpoly == P("x^2 - 6"));
    CHECK(s6.box.re.lo > 0);

    // inverse: 1/√2 has minpoly 2x²−1, and √2·(1/√2) = 1
    AlgebraicNumber inv = alg_inv(s2);
    CHECK(inv.minpoly == P("2*x^2 - 1"));
    CHECK(alg_is_one(alg_mul(s2, inv)));
    CHECK_THROWS(alg_inv(alg_from_rational(QQ(0))));

    // negation
    CHECK(alg_equal(alg_neg(s2), roots_of(P("x^2 - 2"), QQ(1, 1024))[0]));

    // rational fast paths
    AlgebraicNumber shifted = alg_add(s2, alg_from_rational(QQ(1, 2)));
    CHECK(shifted.minpoly == P("4*x^2 - 4*x - 7"));
    AlgebraicNumber scaled = alg_mul(s2, alg_from_rational(QQ(3)));
    CHECK(scaled.minpoly == P("x^2 - 18"));
}

TEST_CASE("polynomial evaluation at algebraic arguments") {
    auto s2 = roots_of(P("x^2 - 2"), QQ(1, 1024))[1];
    // e(x) = x² − 2 evaluates to 0
    CHECK(alg_is_zero(alg_eval_qpoly(QPoly(P("x^2 - 2")), s2)));
    // e(x) = x² + x evaluates to 2 + √2
    AlgebraicNumber v = alg_eval_qpoly(QPoly(P("x^2 + x")), s2);
    CHECK(v.minpoly == P("x^2 - 4*x + 2"));
    CHECK(v.box.re.lo > QQ(34, 10));
    // rational scaling
    AlgebraicNumber w = alg_eval_qpoly(QPoly(P("x"), ZZ(2)), s2);  // √2/2
    CHECK(w.minpoly == P("2*x^2 - 1"));
}

TEST_CASE("primitive element") {
    auto s2 = roots_of(P("x^2 - 2"), QQ(1, 1024))[1];
    auto s3 = roots_of(P("x^2 - 3"), QQ(1, 1024))[1];

    auto pe = primitive_element(s2, s3);
    CHECK(pe.k == 1);
    CHECK(pe.gamma.degree() == 4);
    CHECK(pe.gamma.minpoly == P("x^4 - 10*x^2 + 1"));
    CHECK(alg_equal(alg_eval_qpoly(pe.expr_a, pe.gamma), s2));
    CHECK(alg_equal(alg_eval_qpoly(pe.expr_b, pe.gamma), s3));

    // b rational → k = 0, γ = a
    auto pr = primitive_element(s2, alg_from_rational(QQ(1, 2)));
    CHECK(pr.k == 0);
    CHECK(pr.gamma.minpoly == s2.minpoly);
    CHECK(pr.expr_b.degree() == 0);
    CHECK(pr.expr_b.coeff(0) == QQ(1, 2));

    // a rational → γ = a + b, expressions r and t − r
    auto pa = primitive_element(alg_from_rational(QQ(1, 2)), s3);
    CHECK(pa.k == 1);
    CHECK(pa.gamma.degree() == 2);
    CHECK(alg_equal(pa.gamma, alg_add(alg_from_rational(QQ(1, 2)), s3)));
    CHECK(alg_equal(alg_eval_qpoly(pa.expr_b, pa.gamma), s3));

    // (i, i) → γ = i, both expressions the identity
    auto ipos = roots_of(P("x^2 + 1"), QQ(1, 1024))[1];
    auto pi = primitive_element(ipos, ipos);
    CHECK(pi.k == 0);
    CHECK(pi.gamma.minpoly == P("x^2 + 1"));
    CHECK(alg_equal(alg_eval_qpoly(pi.expr_b, pi.gamma), ipos));

    // mixed degrees: √2 and cbrt(2) give degree 6
    auto c2 = roots_of(P("x^3 - 2"), QQ(1, 1024));
    AlgebraicNumber creal;
    for (auto& r : c2)
        if (r.is_real()) creal = r;
    auto pm = primitive_element(s2, creal);
    CHECK(pm.gamma.degree() == 6);
    CHECK(alg_equal(alg_eval_qpoly(pm.expr_a, pm.gamma), s2));
    CHECK(alg_equal(alg_eval_qpoly(pm.expr_b, pm.gamma), creal));
}

TEST_CASE("valuation profiles") {
    auto s2 = roots_of(P("x^2 - 2"), QQ(1, 1024))[1];
    auto pr = valuation_profile(s2, ZZ(2));
    REQUIRE(pr.entries.size() == 1);
    CHECK(pr.entries[0].first == QQ(1, 2));
    CHECK(pr.entries[0].second == 2);

    auto third = alg_from_rational(QQ(1, 3));
    auto pr3 = valuation_profile(third, ZZ(3));
    REQUIRE(pr3.entries.size() == 1);
    CHECK(pr3.entries[0].first == QQ(-1));
    CHECK(pr3.entries[0].second == 1);

    auto ipos = roots_of(P("x^2 + 1"), QQ(1, 1024))[1];
    auto pri = valuation_profile(ipos, ZZ(7));
    REQUIRE(pri.entries.size() == 1);
    CHECK(pri.entries[0].first == QQ(0));
    CHECK(pri.entries[0].second == 2);

    // mixed-slope example: roots of x² − 6x + 8 = (x−2)(x−4)... use irreducible:
    // x² − 2x − 4 has roots 1±√5, v₂ = 0 and... use 2x² − 3x + 2·? keep simple:
    // x² + 3x + 2 is reducible; take x² − x − 6? reducible too. Use the number
    // 2 + √2 with minpoly x² − 4x + 2: Newton polygon at 2 has slopes giving
    // v₂ = 1/2 on both conjugates.
    auto t = alg_add(s2, alg_from_rational(QQ(2)));
    auto prt = valuation_profile(t, ZZ(2));
    REQUIRE(prt.entries.size() == 1);
    CHECK(prt.entries[0].first == QQ(1, 2));

    // genuinely mixed slopes: 6x² − 5x + 1 → roots 1/2, 1/3 (reducible, so use
    // the profile of x² − (9/2)x + ... via a degree-2 irreducible: x² − 2x − 1
    // at p=2: vertices (0,0),(2,0) flat → both v₂ = 0); and x² − 8 at 2 → v = 3/2
    auto s8 = roots_of(P("x^2 - 8"), QQ(1, 1024))[1];
    auto pr8 = valuation_profile(s8, ZZ(2));
    REQUIRE(pr8.entries.size() == 1);
    CHECK(pr8.entries[0].first == QQ(3, 2));

    CHECK_THROWS(valuation_profile(alg_from_rational(QQ(0)), ZZ(2)));
}

TEST_CASE("weil height reference values") {
    QQ prec(1, 1 << 20);

    // h(3/2) = log 3 ∈ [1.0986, 1.0987]
    QIv h32 = weil_height(alg_from_rational(QQ(3, 2)), prec);
    CHECK(h32.lo > QQ(10986, 10000));
    CHECK(h32.hi < QQ(10987, 10000));
    CHECK(h32.width() <= prec);

    // h(√2) = (1/2) log 2 ≈ 0.34657
    auto s2 = roots_of(P("x^2 - 2"), QQ(1, 1024))[1];
    QIv h2 = weil_height(s2, prec);
    CHECK(h2.lo > QQ(34657, 100000));
    CHECK(h2.hi < QQ(34658, 100000));

    // roots of unity have height 0
    auto z6 = roots_of(P("x^2 - x + 1"), QQ(1, 1024))[0];  // primitive 6th root
    QIv hz = weil_height(z6, prec);
    CHECK(hz.lo == 0);
    CHECK(hz.hi <= prec);

    // h(1) = 0, h(0) = 0
    CHECK(weil_height(alg_from_rational(QQ(1)), prec).hi == 0);
    CHECK(weil_height(alg_from_rational(QQ(0)), prec).hi == 0);

    // Galois invariance: same interval for either conjugate box
    auto r = roots_of(P("x^2 - 2"), QQ(1, 1024));
    QIv ha = weil_height(r[0], prec), hb = weil_height(r[1], prec);
    CHECK(ha.lo == hb.lo);
    CHECK(ha.hi == hb.hi);
}

TEST_CASE("height subadditivity") {
    std::mt19937 rng(20260823);
    QQ prec(1, 1 << 16);
    QIv log2iv(LOG2_LO, LOG2_HI);
    for (int iter = 0; iter < 12; ++iter) {
        // random small algebraic numbers of degree ≤ 3
        std::uniform_int_distribution<int> cd(-4, 4);
        ZPoly f, g;
        do {
            f = ZPoly(std::vector<ZZ>{ZZ(cd(rng)), ZZ(cd(rng)), ZZ(cd(rng)), ZZ(1)});
        } while (f.eval(ZZ(0)) == 0);
        do {
            g = ZPoly(std::vector<ZZ>{ZZ(cd(rng)), ZZ(cd(rng)), ZZ(1)});
        } while (g.eval(ZZ(0)) == 0);
        AlgebraicNumber a = roots_of(f, QQ(1, 1024))[0];
        AlgebraicNumber b = roots_of(g, QQ(1, 1024))[0];
        QIv ha = weil_height(a, prec), hb = weil_height(b, prec);
        QIv hs = weil_height(alg_add(a, b), prec);
        QIv hm = weil_height(alg_mul(a, b), prec);
        CHECK(hm.lo <= ha.hi + hb.hi + prec);
        CHECK(hs.lo <= ha.hi + hb.hi + log2iv.hi + prec);
    }
}

TEST_CASE("product formula") {
    // for nonzero α of degree d: Σ_conjugates log|α_i| − Σ_p v_p(cluster sums)·log p = 0
    std::mt19937 rng(424243);
    std::uniform_int_distribution<int> cd(-9, 9);
    unsigned bits = 96;
    int done = 0;
    while (done < 100) {
        int deg = 1 + (int)(rng() % 4);
        std::vector<ZZ> c((size_t)deg + 1);
        for (auto& x : c) x = cd(rng);
        ZPoly f(std::move(c));
        if (f.degree() < 1 || f.eval(ZZ(0)) == 0) continue;
        AlgebraicNumber a = roots_of(f, QQ(1, 1024))[0];
        const ZPoly& m = a.minpoly;
        // archimedean part: sum of log|conjugate| over all roots of the minpoly
        QIv arch(QQ(0));
        {
            QQ eps = EPS(48);
            bool ok = false;
            for (int attempt = 0; attempt < 8 && !ok; ++attempt, eps = eps / 16) {
                auto conj = roots_of(m, eps);
                arch = QIv(QQ(0));
                ok = true;
                for (auto& r : conj) {
                    QIv n2 = r.box.norm2();
                    if (n2.lo <= 0) { ok = false; break; }
                    arch = arch + log_enclosure(n2, bits) * QQ(1, 2);
                }
            }
            REQUIRE(ok);
        }
        // finite part over primes dividing lc and constant coefficient
        QIv fin(QQ(0));
        ZZ scope = zabs(m.coeff(0) * m.lc());
        for (auto& [p, e] : factor_integer(scope)) {
            (void)e;
            auto pr = valuation_profile(a, p);
            QQ total(0);
            for (auto& [val, cnt] : pr.entries) total += val * cnt;
            fin = fin + log_enclosure(QQ(p), bits) * total;
        }
        QIv sum = arch - fin;
        CHECK(sum.contains(QQ(0)));
        CHECK(sum.width() < QQ(1, 1 << 20));
        ++done;
    }
}

TEST_CASE("point parsing and printing") {
    ProjPoint p1 = parse_point("[1:5]");
    CHECK(!p1.is_infinity());
    CHECK(p1.x1.rational_value() == 5);
    CHECK(point_to_string(p1) == "[1:5]");

    ProjPoint pinf = parse_point("[0:1]");
    CHECK(pinf.is_infinity());
    CHECK(point_to_string(pinf) == "[0:1]");

    ProjPoint p2 = parse_point("[2:3]");  // canonicalized to [1:3/2]
    CHECK(p2.x1.rational_value() == QQ(3, 2));

    ProjPoint pr = parse_point("[1:root(x^2-2, near 1.41)]");
    CHECK(pr.x1.minpoly == P("x^2 - 2"));
    CHECK(pr.x1.box.re.lo > 0);
    ProjPoint pn = parse_point("[1:root(x^2-2, near -1.41)]");
    CHECK(pn.x1.box.re.hi < 0);
    ProjPoint pi = parse_point("[1:root(x^2+1, near 0+1i)]");
    CHECK(pi.x1.box.im.lo > 0);

    // round trip through the printer
    ProjPoint rt = parse_point(point_to_string(pr));
    CHECK(alg_equal(rt.x1, pr.x1));

    CHECK_THROWS(parse_point("[0:0]"));
    CHECK_THROWS(parse_point("1:2"));
    CHECK_THROWS(parse_point("[1:x+]"));
}

TEST_CASE("chordal distance reference values") {
    QQ prec(1, 1 << 20);
    PlaceQ vinf = PlaceQ::infinite();
    PlaceQ v2 = PlaceQ::prime(ZZ(2));

    // δ_∞([1:0],[0:1]) = 1
    QIv d1 = chordal_distance(parse_point("[1:0]"), parse_point("[0:1]"), vinf, prec);
    CHECK(d1.contains(QQ(1)));
    CHECK(d1.width() <= prec);

    // δ_∞([1:1],[1:2]) = 1/2
    QIv d2 = chordal_distance(parse_point("[1:1]"), parse_point("[1:2]"), vinf, prec);
    CHECK(d2.contains(QQ(1, 2)));
    CHECK(d2.width() <= prec);

    // δ_2([1:0],[1:2]) = |2|₂ = 1/2
    QIv d3 = chordal_distance(parse_point("[1:0]"), parse_point("[1:2]"), v2, prec);
    CHECK(d3.contains(QQ(1, 2)));
    CHECK(d3.width() <= prec);

    // identical points → exactly 0
    QIv dz = chordal_distance(parse_point("[1:5]"), parse_point("[1:5]"), vinf, prec);
    CHECK(dz.lo == 0);
    CHECK(dz.hi == 0);

    // symmetry
    QIv dA = chordal_distance(parse_point("[1:3]"), parse_point("[1:7]"), v2, prec);
    QIv dB = chordal_distance(parse_point("[1:7]"), parse_point("[1:3]"), v2, prec);
    CHECK(dA.lo == dB.lo);
    CHECK(dA.hi == dB.hi);
    CHECK(dA.contains(QQ(1, 4)));  // |7−3|₂ = 1/4, both points 2-integral units

    // projective scaling invariance via the parser's canonicalization
    QIv dS = chordal_distance(parse_point("[3:3]"), parse_point("[5:10]"), vinf, prec);
    CHECK(dS.lo == d2.lo);
    CHECK(dS.hi == d2.hi);
}

TEST_CASE("log_abs_range") {
    unsigned bits = 96;
    auto s2 = roots_of(P("x^2 - 2"), QQ(1, 1024))[1];

    // |√2|₂ = 2^(−1/2): log = −(1/2)log2 ≈ −0.34657
    QIv l2 = log_abs_range(s2, PlaceQ::prime(ZZ(2)), bits);
    CHECK(l2.lo < QQ(-34657, 100000));
    CHECK(l2.hi > QQ(-34658, 100000));

    // |√2|_∞ = √2 on both conjugates: log ≈ 0.34657
    QIv li = log_abs_range(s2, PlaceQ::infinite(), bits);
    CHECK(li.lo > QQ(34656, 100000));
    CHECK(li.hi < QQ(34658, 100000));

    // rational: |3/4|₂ = 4 → log ∈ [1.386, 1.387]
    QIv lr = log_abs_range(alg_from_rational(QQ(3, 4)), PlaceQ::prime(ZZ(2)), bits);
    CHECK(lr.lo > QQ(1386, 1000));
    CHECK(lr.hi < QQ(1387, 1000));

    CHECK_THROWS(log_abs_range(alg_from_rational(QQ(0)), PlaceQ::infinite(), bits));
}
