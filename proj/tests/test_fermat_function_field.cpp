#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abctk/fermat.hpp"

#include <random>

using namespace abctk;

namespace {

ZPoly P(const std::string& s) {
    auto p = parse_poly(s);
    REQUIRE(p.has_value());
    return *p;
}

FFElement frac_elt(int n, const std::string& num, const std::string& den, int ypow = 0) {
    return ff_from_frac(n, ff_frac(P(num), P(den)), ypow);
}

bool alg_same(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return alg_is_zero(alg_sub(a, b));
}

FFElement random_elt(int n, std::mt19937& rng, bool allow_zero = false) {
    std::uniform_int_distribution<int> cd(-3, 3), dd(0, 2);
    auto rpoly = [&](bool nonzero) {
        ZPoly p;
        do {
            std::vector<ZZ> c((size_t)dd(rng) + 1);
            for (auto& v : c) v = cd(rng);
            p = ZPoly(std::move(c));
        } while (nonzero && p.is_zero());
        return p;
    };
    FFElement f = ff_zero(n);
    do {
        for (int i = 0; i < n; ++i) f.comp[(size_t)i] = ff_frac(rpoly(false), rpoly(true));
    } while (!allow_zero && f.is_zero());
    return f;
}

}  // namespace

TEST_CASE("normalization gives the canonical presentation") {
    // contents cancel
    FFElement a = ff_normalize(2, {{P("2*x"), P("2")}});
    CHECK(a.comp[0].num == P("x"));
    CHECK(a.comp[0].den == P("1"));
    // common polynomial factors cancel
    FFElement b = ff_normalize(2, {{P("x^2 - 1"), P("x - 1")}});
    CHECK(b.comp[0].num == P("x + 1"));
    CHECK(b.comp[0].den == P("1"));
    // canonical input is a fixed point
    FFElement c = ff_normalize(3, {{P("x"), P("2")}, {P("1"), P("x + 1")}});
    FFElement c2 = ff_normalize(3, {{c.comp[0].num, c.comp[0].den}, {c.comp[1].num, c.comp[1].den}});
    CHECK(ff_eq(c, c2));
    // denominator sign is normalized
    FFElement d = ff_normalize(2, {{P("x"), P("-2")}});
    CHECK(d.comp[0].num == P("-x"));
    CHECK(d.comp[0].den == P("2"));
    CHECK_THROWS(ff_normalize(2, {{P("1"), ZPoly()}}));
}

TEST_CASE("arithmetic uses the defining relation y^n = 1 - x^n") {
    for (int n = 2; n <= 4; ++n) {
        FFElement y = ff_y(n);
        FFElement p = ff_mul(y, ff_pow(y, n - 1));
        FFElement expect = ff_normalize(n, {{P("1 - x^" + std::to_string(n)), P("1")}});
        CHECK(ff_eq(p, expect));
    }
    // f + 0 = f
    std::mt19937 rng(2024);
    for (int it = 0; it < 5; ++it) {
        FFElement f = random_elt(3, rng);
        CHECK(ff_eq(ff_add(f, ff_zero(3)), f));
    }
    // (x + y)(x - y) = x^2 - y^2 = 2x^2 - 1 on C_2
    FFElement q = ff_mul(ff_add(ff_x(2), ff_y(2)), ff_sub(ff_x(2), ff_y(2)));
    CHECK(ff_eq(q, frac_elt(2, "2*x^2 - 1", "1")));
    CHECK_THROWS(ff_add(ff_x(2), ff_x(3)));
}

TEST_CASE("ring axioms on random elements") {
    std::mt19937 rng(77);
    for (int it = 0; it < 8; ++it) {
        int n = 2 + (it % 3);
        FFElement f = random_elt(n, rng), g = random_elt(n, rng), h = random_elt(n, rng);
        CHECK(ff_eq(ff_mul(ff_mul(f, g), h), ff_mul(f, ff_mul(g, h))));
        CHECK(ff_eq(ff_mul(f, ff_add(g, h)), ff_add(ff_mul(f, g), ff_mul(f, h))));
        CHECK(ff_eq(ff_add(f, g), ff_add(g, f)));
        CHECK(ff_eq(ff_mul(f, g), ff_mul(g, f)));
    }
}

TEST_CASE("inversion") {
    // 1/y = y^{n-1}/(1 - x^n)
    for (int n = 2; n <= 4; ++n) {
        FFElement yi = ff_inverse(ff_y(n));
        FFElement expect = frac_elt(n, "1", "1 - x^" + std::to_string(n), n - 1);
        CHECK(ff_eq(yi, expect));
    }
    // 1/x has q_0 = x
    FFElement xi = ff_inverse(ff_x(3));
    CHECK(ff_eq(xi, frac_elt(3, "1", "x")));
    // norm of 2x - y on C_2: (2x - y)(2x + y) = 4x^2 - y^2 = 5x^2 - 1
    FFElement u = ff_sub(ff_mul(ff_const(2, QQ(2)), ff_x(2)), ff_y(2));
    FFElement ub = ff_add(ff_mul(ff_const(2, QQ(2)), ff_x(2)), ff_y(2));
    CHECK(ff_eq(ff_mul(u, ub), frac_elt(2, "5*x^2 - 1", "1")));
    CHECK(ff_eq(ff_mul(u, ff_inverse(u)), ff_const(2, QQ(1))));
    CHECK_THROWS(ff_inverse(ff_zero(2)));
}

TEST_CASE("inverse property over random nonzero elements") {
    std::mt19937 rng(4242);
    int done = 0;
    while (done < 50) {
        int n = 2 + (done % 3);
        FFElement f = random_elt(n, rng);
        if (ff_complexity(f).H > 8) continue;
        CHECK(ff_eq(ff_mul(f, ff_inverse(f)), ff_const(n, QQ(1))));
        ++done;
    }
}

TEST_CASE("complexity") {
    CHECK(ff_complexity(ff_x(2)).H == doctest::Approx(2.0));
    CHECK(ff_complexity(frac_elt(2, "x^5", "1")).H == doctest::Approx(5.0));
    double h10 = ff_complexity(frac_elt(2, "10", "1")).H;
    CHECK(h10 == doctest::Approx(std::log(10.0)));
    // H >= n always
    CHECK(ff_complexity(ff_zero(4)).H >= 4.0);
}

TEST_CASE("curve points") {
    auto one = alg_from_rational(QQ(1));
    auto zero = alg_from_rational(QQ(0));
    CHECK_NOTHROW(curve_point(2, zero, one));
    CHECK_NOTHROW(curve_point(2, alg_from_rational(QQ(3, 5)), alg_from_rational(QQ(4, 5))));
    CHECK_THROWS(curve_point(2, one, one));
    // (1/2, sqrt(3)/2) on C_2
    auto s32 = roots_of(P("4*x^2 - 3"), QQ(1, 1024))[1];  // positive root
    CHECK_NOTHROW(curve_point(2, alg_from_rational(QQ(1, 2)), s32));
    // points at infinity: eta^n = -1
    for (int n = 2; n <= 4; ++n) CHECK(infinity_points(n).size() == (size_t)n);
    CHECK_THROWS(curve_point_infinity(2, one));
    // fibers over x = 0 on C_3: the three cube roots of unity
    CHECK(fiber_points(3, P("x")).size() == 3);
    // fibers over x = 1: the single ramified point (1, 0)
    auto fb = fiber_points(3, P("x - 1"));
    REQUIRE(fb.size() == 1);
    CHECK(alg_is_zero(fb[0].y0));
}

TEST_CASE("evaluation at curve points") {
    auto pt = [&](QQ a, QQ b) { return curve_point(2, alg_from_rational(a), alg_from_rational(b)); };
    CurvePoint Q = pt(QQ(3, 5), QQ(4, 5));
    // x evaluates to x0
    ProjPoint vx = ff_evaluate(ff_x(2), Q);
    CHECK(!vx.is_infinity());
    CHECK(alg_same(vx.x1, Q.x0));
    // pi = x^n at a point with x0 = 1 evaluates to 1
    ProjPoint v1 = ff_evaluate(ff_pow(ff_x(2), 2), pt(QQ(1), QQ(0)));
    CHECK(alg_same(v1.x1, alg_from_rational(QQ(1))));
    // y/x at (0, 1) is a pole
    FFElement yox = ff_mul(ff_y(2), ff_inverse(ff_x(2)));
    CHECK(ff_evaluate(yox, pt(QQ(0), QQ(1))).is_infinity());
    // 0/0 resolution: (1 - y)/x^2 = 1/(1 + y) at (0, 1)
    FFElement f = ff_mul(ff_sub(ff_const(2, QQ(1)), ff_y(2)), ff_inverse(ff_pow(ff_x(2), 2)));
    ProjPoint vf = ff_evaluate(f, pt(QQ(0), QQ(1)));
    CHECK(alg_same(vf.x1, alg_from_rational(QQ(1, 2))));
    // evaluation at infinity: x has a pole, y/x takes the value eta
    for (const auto& Pinf : infinity_points(3)) {
        CHECK(ff_evaluate(ff_x(3), Pinf).is_infinity());
        ProjPoint vv = ff_evaluate(ff_mul(ff_y(3), ff_inverse(ff_x(3))), Pinf);
        CHECK(alg_same(vv.x1, Pinf.eta));
    }
}

TEST_CASE("evaluation commutes with arithmetic") {
    std::mt19937 rng(1313);
    auto s32 = roots_of(P("4*x^2 - 3"), QQ(1, 1024))[1];
    std::vector<CurvePoint> pts = {
        curve_point(2, alg_from_rational(QQ(3, 5)), alg_from_rational(QQ(4, 5))),
        curve_point(2, alg_from_rational(QQ(1, 2)), s32),
    };
    for (int it = 0; it < 4; ++it) {
        FFElement f = random_elt(2, rng), g = random_elt(2, rng);
        for (const auto& Q : pts) {
            ProjPoint vf = ff_evaluate(f, Q), vg = ff_evaluate(g, Q);
            if (vf.is_infinity() || vg.is_infinity()) continue;
            ProjPoint vm = ff_evaluate(ff_mul(f, g), Q);
            ProjPoint va = ff_evaluate(ff_add(f, g), Q);
            REQUIRE(!vm.is_infinity());
            REQUIRE(!va.is_infinity());
            CHECK(alg_same(vm.x1, alg_mul(vf.x1, vg.x1)));
            CHECK(alg_same(va.x1, alg_add(vf.x1, vg.x1)));
        }
    }
}

TEST_CASE("map degrees") {
    for (int n = 2; n <= 4; ++n) {
        CHECK(ff_map_degree(ff_pow(ff_x(n), n)) == (long)n * n);
        CHECK(ff_map_degree(ff_x(n)) == n);
        CHECK(ff_map_degree(ff_y(n)) == n);
    }
    CHECK(ff_map_degree(ff_pow(ff_x(2), 2)) == 4);
    CHECK_THROWS(ff_map_degree(ff_const(2, QQ(5))));
}

TEST_CASE("critical locus of the n-th power map is {XYZ = 0} with index n") {
    for (int n = 2; n <= 4; ++n) {
        CriticalLocus cl = ff_critical_locus(ff_pow(ff_x(n), n));
        CHECK(cl.map_degree == (long)n * n);
        // finite critical x-coordinates: 0 and the n-th roots of unity
        ZPoly expect = ZPoly::monomial(ZZ(1), (size_t)(n + 1)) - ZPoly::x();  // x^(n+1) - x
        CHECK(cl.eliminant == expect);
        int pts = 0;
        for (const auto& fb : cl.fibers)
            for (int e : fb.e) {
                CHECK(e == n);
                ++pts;
            }
        CHECK(pts == 2 * n);  // n over x=0, n (one per root) over x^n=1
        REQUIRE(cl.infinity_e.size() == (size_t)n);
        for (int e : cl.infinity_e) CHECK(e == n);
        CHECK(cl.ramification_degree == 3L * n * (n - 1));
    }
}

TEST_CASE("Riemann-Hurwitz accounting for the power map, n = 2..5") {
    for (int n = 2; n <= 5; ++n) {
        CriticalLocus cl = ff_critical_locus(ff_pow(ff_x(n), n));
        long g = (long)(n - 1) * (n - 2) / 2;
        CHECK(cl.ramification_degree == 2 * g - 2 + 2L * n * n);
    }
}

TEST_CASE("critical locus of x and of a Mobius transform of x on C_2") {
    CriticalLocus cl = ff_critical_locus(ff_x(2));
    CHECK(cl.map_degree == 2);
    CHECK(cl.eliminant == P("x^2 - 1"));  // the points with y = 0
    REQUIRE(cl.fibers.size() == 2);       // irreducible factors x - 1 and x + 1
    for (const auto& fb : cl.fibers) CHECK(fb.e == std::vector<int>{2});
    CHECK(cl.infinity_e == std::vector<int>{1, 1});
    CHECK(cl.ramification_degree == 2);  // 2g - 2 + 2*2 with g = 0

    // postcomposition with an automorphism of P^1 preserves the critical locus
    FFElement mob = ff_mul(ff_add(ff_mul(ff_const(2, QQ(2)), ff_x(2)), ff_const(2, QQ(1))),
                           ff_inverse(ff_sub(ff_x(2), ff_const(2, QQ(3)))));
    CriticalLocus cm = ff_critical_locus(mob);
    CHECK(cm.eliminant == cl.eliminant);
    REQUIRE(cm.fibers.size() == 2);
    for (const auto& fb : cm.fibers) CHECK(fb.e == std::vector<int>{2});
    CHECK(cm.ramification_degree == 2);
    CHECK_THROWS(ff_critical_locus(ff_const(2, QQ(1))));
}

TEST_CASE("local parameter identity at infinity") {
    CHECK(local_parameter_identity_check(2, ZZ(2)));
    CHECK(local_parameter_identity_check(3, ZZ(2)));
    CHECK(local_parameter_identity_check(5, ZZ(7)));
    CHECK_THROWS(local_parameter_identity_check(2, ZZ(1)));
}

TEST_CASE("text format round-trip") {
    std::mt19937 rng(99);
    for (int it = 0; it < 10; ++it) {
        int n = 2 + (it % 3);
        FFElement f = random_elt(n, rng, true);
        FFElement g = parse_ff(n, ff_to_string(f));
        CHECK(ff_eq(f, g));
    }
    CHECK(ff_to_string(ff_zero(2)) == "(0)/(1)");
    CHECK(ff_eq(parse_ff(2, "(0)/(1)"), ff_zero(2)));
    FFElement h = frac_elt(3, "x^2 - 2", "3*x + 1", 2);
    CHECK(ff_to_string(h) == "(x^2 - 2)/(3*x + 1)*y^2");
    CHECK_THROWS(parse_ff(2, "x + y"));
}
