#include "abctk/alg.hpp"
#include "abctk/nf.hpp"
#include "abctk/fp.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace abctk {

// polynomial in y with coefficients in Z[x], lowest y-degree first
using YPoly = std::vector<ZPoly>;

static int ydeg(const YPoly& A) {
    for (size_t i = A.size(); i-- > 0;)
        if (!A[i].is_zero()) return (int)i;
    return -1;
}

// resultant in y via fraction-free Bareiss on the Sylvester matrix over Z[x]
ZPoly biv_resultant_y(const YPoly& Af, const YPoly& Bf) {
    int m = ydeg(Af), n = ydeg(Bf);
    if (m < 0 || n < 0) throw std::invalid_argument("biv_resultant_y: zero input");
    if (m == 0) return Af[0].pow((unsigned long)n);
    if (n == 0) return Bf[0].pow((unsigned long)m);
    int N = m + n;
    std::vector<std::vector<ZPoly>> a((size_t)N, std::vector<ZPoly>((size_t)N));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) a[(size_t)i][(size_t)(i + j)] = Af[(size_t)(m - j)];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) a[(size_t)(n + i)][(size_t)(i + j)] = Bf[(size_t)(n - j)];
    ZPoly prev(ZZ(1));
    bool neg = false;
    for (int k = 0; k < N - 1; ++k) {
        if (a[(size_t)k][(size_t)k].is_zero()) {
            int piv = -1;
            for (int i = k + 1; i < N; ++i)
                if (!a[(size_t)i][(size_t)k].is_zero()) { piv = i; break; }
            if (piv < 0) return ZPoly();
            std::swap(a[(size_t)k], a[(size_t)piv]);
            neg = !neg;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j)
                a[(size_t)i][(size_t)j] =
                    (a[(size_t)k][(size_t)k] * a[(size_t)i][(size_t)j] -
                     a[(size_t)i][(size_t)k] * a[(size_t)k][(size_t)j])
                        .divexact(prev);
            a[(size_t)i][(size_t)k] = ZPoly();
        }
        prev = a[(size_t)k][(size_t)k];
    }
    ZPoly det = a[(size_t)(N - 1)][(size_t)(N - 1)];
    return neg ? -det : det;
}

namespace {

// choose, among the roots of h, the unique one lying in the (refinable) target box
AlgebraicNumber match_root(const ZPoly& h, QBox target,
                           const std::function<QBox(const QQ&)>& refine_target) {
    QQ w = std::max(target.width(), QQ(1, 1024));
    std::vector<AlgebraicNumber> cand = roots_of(h, w);
    for (int round = 0; round < 256; ++round) {
        std::vector<AlgebraicNumber> live;
        for (auto& r : cand)
            if (!r.box.disjoint(target)) live.push_back(r);
        if (live.size() == 1) return live[0];
        if (live.empty()) throw std::logic_error("match_root: target box lost all roots");
        w = w / 16;
        target = refine_target(w);
        for (auto& r : live) r = alg_refine(r, w);
        cand = std::move(live);
    }
    throw std::logic_error("match_root: failed to separate candidates");
}

ZPoly scale_roots(const ZPoly& f, const QQ& r) {
    // polynomial whose roots are r * (roots of f)
    int d = f.degree();
    ZZ num = r.get_num(), den = r.get_den();
    std::vector<ZZ> c((size_t)d + 1);
    for (int i = 0; i <= d; ++i)
        c[(size_t)i] = f.coeff((size_t)i) * zpow(num, (unsigned long)(d - i)) *
                       zpow(den, (unsigned long)i);
    return ZPoly(std::move(c)).primitive_part();
}

}  // namespace

AlgebraicNumber alg_neg(const AlgebraicNumber& a) {
    if (a.is_rational()) return alg_from_rational(-a.rational_value());
    std::vector<ZZ> c(a.minpoly.coeffs());
    for (size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
    return {ZPoly(std::move(c)).primitive_part(), -a.box};
}

AlgebraicNumber alg_inv(const AlgebraicNumber& a) {
    if (alg_is_zero(a)) throw std::domain_error("alg_inv: zero");
    if (a.is_rational()) return alg_from_rational(QQ(1) / a.rational_value());
    AlgebraicNumber x = a;
    while (x.box.norm2().contains_zero()) x = alg_refine(x, x.box.width() / 4);
    return {x.minpoly.reverse().primitive_part(), x.box.inv()};
}

AlgebraicNumber alg_add(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (a.is_rational() && b.is_rational())
        return alg_from_rational(a.rational_value() + b.rational_value());
    if (b.is_rational()) {
        QQ r = b.rational_value();
        return {a.minpoly.shift(-r), a.box + QBox(r)};
    }
    if (a.is_rational()) return alg_add(b, a);
    // Res_y(f(y), g(x - y))
    const ZPoly& f = a.minpoly;
    const ZPoly& g = b.minpoly;
    int dg = g.degree();
    YPoly A((size_t)f.degree() + 1), B((size_t)dg + 1);
    for (int i = 0; i <= f.degree(); ++i) A[(size_t)i] = ZPoly(f.coeff((size_t)i));
    for (int mI = 0; mI <= dg; ++mI) {
        std::vector<ZZ> cm((size_t)(dg - mI) + 1, ZZ(0));
        for (int j = mI; j <= dg; ++j) {
            ZZ binom;
            mpz_bin_uiui(binom.get_mpz_t(), (unsigned long)j, (unsigned long)mI);
            cm[(size_t)(j - mI)] += g.coeff((size_t)j) * binom;
        }
        ZPoly part(std::move(cm));
        if (mI % 2) part = -part;
        B[(size_t)mI] = part;
    }
    ZPoly h = biv_resultant_y(A, B);
    AlgebraicNumber ra = a, rb = b;
    auto refine_target = [&](const QQ& w) {
        ra = alg_refine(ra, w / 4);
        rb = alg_refine(rb, w / 4);
        return ra.box + rb.box;
    };
    return match_root(squarefree_part(h), ra.box + rb.box, refine_target);
}

AlgebraicNumber alg_sub(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return alg_add(a, alg_neg(b));
}

AlgebraicNumber alg_mul(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (a.is_rational() && b.is_rational())
        return alg_from_rational(a.rational_value() * b.rational_value());
    if (b.is_rational()) {
        QQ r = b.rational_value();
        if (r == 0) return alg_from_rational(QQ(0));
        return {scale_roots(a.minpoly, r), a.box * r};
    }
    if (a.is_rational()) return alg_mul(b, a);
    if (alg_is_zero(a) || alg_is_zero(b)) return alg_from_rational(QQ(0));
    // Res_y(f(y), y^dg · g(x/y))
    const ZPoly& f = a.minpoly;
    const ZPoly& g = b.minpoly;
    int dg = g.degree();
    YPoly A((size_t)f.degree() + 1), B((size_t)dg + 1);
    for (int i = 0; i <= f.degree(); ++i) A[(size_t)i] = ZPoly(f.coeff((size_t)i));
    for (int j = 0; j <= dg; ++j) B[(size_t)(dg - j)] = ZPoly::monomial(g.coeff((size_t)j), (size_t)j);
    ZPoly h = biv_resultant_y(A, B);
    AlgebraicNumber ra = a, rb = b;
    auto refine_target = [&](const QQ& w) {
        ra = alg_refine(ra, w / 4);
        rb = alg_refine(rb, w / 4);
        return ra.box * rb.box;
    };
    return match_root(squarefree_part(h), ra.box * rb.box, refine_target);
}

AlgebraicNumber alg_eval_qpoly(const QPoly& e, const AlgebraicNumber& a) {
    if (e.degree() <= 0) return alg_from_rational(e.degree() < 0 ? QQ(0) : e.coeff(0));
    if (a.is_rational()) return alg_from_rational(e.eval(a.rational_value()));
    // Res_y(f(y), den·x − num(y))
    const ZPoly& f = a.minpoly;
    YPoly A((size_t)f.degree() + 1), B((size_t)e.num.degree() + 1);
    for (int i = 0; i <= f.degree(); ++i) A[(size_t)i] = ZPoly(f.coeff((size_t)i));
    B[0] = ZPoly::monomial(e.den, 1) - ZPoly(e.num.coeff(0));
    for (int i = 1; i <= e.num.degree(); ++i) B[(size_t)i] = ZPoly(-e.num.coeff((size_t)i));
    ZPoly h = biv_resultant_y(A, B);
    auto eval_box = [&](const AlgebraicNumber& x) {
        QBox acc{QIv(QQ(0)), QIv(QQ(0))};
        for (int i = e.num.degree(); i >= 0; --i)
            acc = acc * x.box + QBox(QQ(e.num.coeff((size_t)i)));
        return acc * (QQ(1) / QQ(e.den));
    };
    AlgebraicNumber ra = a;
    auto refine_target = [&](const QQ& w) {
        ra = alg_refine(ra, w / (4 * std::max(QQ(1), qabs(e.lc()))));
        return eval_box(ra);
    };
    return match_root(squarefree_part(h), eval_box(ra), refine_target);
}


PrimitiveElementResult primitive_element(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    QPoly t(ZPoly::x());
    if (b.is_rational())
        return {a, 0, t, QPoly(b.rational_value())};
    if (a.is_rational()) {
        QQ r = a.rational_value();
        ZPoly m = b.minpoly.shift(-r);  // minpoly of r + b
        AlgebraicNumber gamma{m, b.box + QBox(r)};
        return {gamma, 1, QPoly(r), t - QPoly(r)};
    }
    if (a.minpoly == b.minpoly && alg_equal(a, b))
        return {a, 0, t, t};
    const ZPoly& f = a.minpoly;
    const ZPoly& g = b.minpoly;
    for (long k = 1; k < 64; ++k) {
        // candidate γ = a + k b with minpoly among factors of Res_y(g(y), f(x − k y))
        int df = f.degree();
        YPoly A((size_t)g.degree() + 1), B((size_t)df + 1);
        for (int i = 0; i <= g.degree(); ++i) A[(size_t)i] = ZPoly(g.coeff((size_t)i));
        for (int mI = 0; mI <= df; ++mI) {
            std::vector<ZZ> cm((size_t)(df - mI) + 1, ZZ(0));
            for (int j = mI; j <= df; ++j) {
                ZZ binom;
                mpz_bin_uiui(binom.get_mpz_t(), (unsigned long)j, (unsigned long)mI);
                cm[(size_t)(j - mI)] += f.coeff((size_t)j) * binom;
            }
            ZPoly part(std::move(cm));
            part = part * zpow(ZZ(k), (unsigned long)mI);
            if (mI % 2) part = -part;
            B[(size_t)mI] = part;
        }
        ZPoly h = biv_resultant_y(A, B);
        AlgebraicNumber ra = a, rb = b;
        auto refine_target = [&](const QQ& w) {
            ra = alg_refine(ra, w / (4 * (k + 1)));
            rb = alg_refine(rb, w / (4 * (k + 1)));
            return ra.box + rb.box * QQ(k);
        };
        AlgebraicNumber gamma =
            match_root(squarefree_part(h), ra.box + rb.box * QQ(k), refine_target);
        // extract b from gcd(g(y), f(γ − k y)) over Q(γ)
        NFCtx K{QPoly(gamma.minpoly)};
        NFPoly G((size_t)g.degree() + 1), F((size_t)df + 1);
        for (int i = 0; i <= g.degree(); ++i) G[(size_t)i] = QPoly(g.coeff((size_t)i));
        for (int mI = 0; mI <= df; ++mI) {
            QPoly acc;
            for (int j = mI; j <= df; ++j) {
                ZZ binom;
                mpz_bin_uiui(binom.get_mpz_t(), (unsigned long)j, (unsigned long)mI);
                // f_j · C(j,m) · γ^{j−m}
                QPoly term = K.reduce(QPoly(ZPoly::monomial(ZZ(1), (size_t)(j - mI))) *
                                      QPoly(QQ(f.coeff((size_t)j) * binom)));
                acc = acc + term;
            }
            acc = acc * qpow(QQ(-k), mI);
            F[(size_t)mI] = K.reduce(acc);
        }
        NFPoly d = nf_gcd(G, F, K);
        if (nf_deg(d) != 1) continue;  // k collides conjugates; try the next one
        QPoly expr_b = K.reduce(-d[0]);            // monic: y + d0 = 0 → b = −d0(γ)
        QPoly expr_a = K.reduce(t - expr_b * QQ(k));
        // exact verification by substitution mod m(γ)
        auto subst = [&](const ZPoly& poly, const QPoly& e) {
            QPoly acc;
            for (int i = poly.degree(); i >= 0; --i)
                acc = K.reduce(acc * e + QPoly(QQ(poly.coeff((size_t)i))));
            return acc;
        };
        if (!subst(f, expr_a).is_zero() || !subst(g, expr_b).is_zero())
            throw std::logic_error("primitive_element: substitution check failed");
        return {gamma, k, expr_a, expr_b};
    }
    throw std::logic_error("primitive_element: no k < 64 worked");
}

}  // namespace abctk
