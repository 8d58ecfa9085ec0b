#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abctk/cmp.hpp"

#include <random>

using namespace abctk;

namespace {

ZPoly P(const std::string& s) {
    auto p = parse_poly(s);
    REQUIRE(p.has_value());
    return *p;
}

const QQ kPrec(1, 1000000);

// evaluate the dependency as a function-field element and demand exact zero
void reverify(const Dependency& dep, const FFElement& f, const FFElement& g) {
    FFElement acc = ff_zero(f.n);
    for (size_t i = 0; i < dep.coeffs.rows; ++i)
        for (size_t j = 0; j < dep.coeffs.cols; ++j) {
            const ZZ& c = dep.coeffs.at(i, j);
            if (c == 0) continue;
            FFElement t = ff_mul(ff_pow(f, (long)i), ff_pow(g, (long)j));
            acc = ff_add(acc, ff_mul(ff_const(f.n, QQ(c)), t));
        }
    CHECK(acc.is_zero());
}

}  // namespace

TEST_CASE("coordinate dependency on the quadratic curve") {
    FFElement x = ff_x(2), y = ff_y(2);
    Dependency dep = find_dependency(x, y);
    // curve relation found at the smallest admissible block
    CHECK(dep.block == 2);
    CHECK(dep.L == 32);  // H = 2, L = ceil(4 H^3)
    // coefficients proportional to x^2 + y^2 - 1
    ZZ s = dep.coeffs.at(2, 0);
    REQUIRE(s != 0);
    CHECK(dep.coeffs.at(0, 2) == s);
    CHECK(dep.coeffs.at(0, 0) == -s);
    CHECK(dep.coeffs.at(1, 0) == 0);
    CHECK(dep.coeffs.at(0, 1) == 0);
    CHECK(dep.coeffs.at(1, 1) == 0);
    reverify(dep, x, y);
    bool siegel_ok =
        dep.cols_used > dep.rows_used ? dep.siegel_bound > 0 : dep.siegel_bound == 0;
    CHECK(siegel_ok);
}

TEST_CASE("coordinate dependency on the cubic curve") {
    FFElement x = ff_x(3), y = ff_y(3);
    Dependency dep = find_dependency(x, y);
    CHECK(dep.block == 3);
    CHECK(dep.L == 108);  // H = 3
    ZZ s = dep.coeffs.at(3, 0);
    REQUIRE(s != 0);
    CHECK(dep.coeffs.at(0, 3) == s);
    CHECK(dep.coeffs.at(0, 0) == -s);
    for (size_t i = 0; i <= 3; ++i)
        for (size_t j = 0; j + i <= 3; ++j)
            if (!((i == 3 && j == 0) || (i == 0 && j == 3) || (i == 0 && j == 0)))
                CHECK(dep.coeffs.at(i, j) == 0);
    reverify(dep, x, y);
}

TEST_CASE("dependency between a function and its square") {
    FFElement x = ff_x(2);
    FFElement x2 = ff_mul(x, x);
    Dependency dep = find_dependency(x, x2);
    CHECK(dep.block <= 2);
    reverify(dep, x, x2);
}

TEST_CASE("dependencies for random small pairs re-verify to zero") {
    std::mt19937 rng(20260823);
    std::uniform_int_distribution<int> cd(-2, 2);
    int done = 0;
    while (done < 8) {
        // random small numerator-only elements on C_2
        ZPoly p0(std::vector<ZZ>{cd(rng), cd(rng)});
        ZPoly p1(std::vector<ZZ>{cd(rng)});
        FFElement f = ff_normalize(2, {{p0, ZPoly(ZZ(1))}, {p1, ZPoly(ZZ(1))}});
        FFElement g = ff_add(ff_x(2), ff_const(2, QQ(cd(rng))));
        if (f.is_zero()) continue;
        Dependency dep = find_dependency(f, g);
        reverify(dep, f, g);
        ++done;
    }
}

TEST_CASE("comparison constants from the quadratic coordinate dependency") {
    FFElement x = ff_x(2), y = ff_y(2);
    Dependency dep = find_dependency(x, y);
    ComparisonConstants cc = comparison_constants(dep, dep.H);
    CHECK(cc.a == QQ(32));  // 4 * 2^3
    CHECK(cc.m == 2);
    // normalized coefficients are all +-1: observed height log 1 = 0
    CHECK(cc.q.hi < QQ(1, 1000));
    // b = 6 log 2 + 5 log 2 = 11 log 2
    CHECK(cc.b.lo < QQ(76247, 10000));
    CHECK(cc.b.hi > QQ(76246, 10000));
}

TEST_CASE("comparison offset grows with the complexity bound") {
    FFElement x = ff_x(2), y = ff_y(2);
    Dependency dep = find_dependency(x, y);
    ComparisonConstants c2 = comparison_constants(dep, 2.0);
    ComparisonConstants c5 = comparison_constants(dep, 5.0);
    CHECK(c5.a > c2.a);
    CHECK(c5.b.lo > c2.b.hi - (c2.b.hi - c2.b.lo));
    CHECK(c5.b.lo > c2.b.lo);
}

TEST_CASE("degenerate dependency without positive f-exponent is rejected") {
    Dependency dep;
    dep.coeffs = IntMatrix(3, 3);
    dep.coeffs.at(0, 1) = 1;
    dep.coeffs.at(0, 2) = -1;
    CHECK_THROWS_AS((void)comparison_constants(dep, 2.0), std::runtime_error);
}

TEST_CASE("height comparison holds at many sampled points") {
    FFElement x = ff_x(2), y = ff_y(2);
    Dependency dep = find_dependency(y, x);
    ComparisonConstants cc = comparison_constants(dep, dep.H);
    // points over a spread of rational base values
    std::vector<CurvePoint> pts;
    for (long t = 2; pts.size() < 50; ++t) {
        for (auto& Q : fiber_points(2, ZPoly(std::vector<ZZ>{ZZ(-1), ZZ(t * t + 1)})))
            pts.push_back(Q);  // x^2 = 1/(t^2+1)
    }
    pts.resize(50);
    ComparisonReport rep = verify_comparison(y, x, pts, cc, kPrec);
    CHECK(rep.ok);
    CHECK(rep.checks.size() == 50);
    for (const auto& ck : rep.checks) CHECK(!ck.violated);
}

TEST_CASE("a deliberately tiny slope is flagged as a violation") {
    FFElement x = ff_x(2);
    FFElement f = ff_pow(x, 6);
    // claim h(x^6(Q)) <= (1/100) h(x(Q)) + 1/100: certified false at x = 1/3
    ComparisonConstants cc;
    cc.a = QQ(1, 100);
    cc.b = QIv(QQ(1, 100));
    auto pts = fiber_points(2, P("9*x^2 - 1"));
    REQUIRE(!pts.empty());
    ComparisonReport rep = verify_comparison(f, x, pts, cc, kPrec);
    CHECK(!rep.ok);
}
