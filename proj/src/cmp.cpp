#include "abctk/cmp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abctk {

namespace {

ZPoly poly_lcm(const ZPoly& a, const ZPoly& b) {
    if (a.degree() < 0 || b.degree() < 0) throw std::logic_error("poly_lcm: zero input");
    ZPoly g = poly_gcd(a, b);
    ZPoly l = (a * b).divexact(g);
    return l.primitive_part();
}

}  // namespace

Dependency find_dependency(const FFElement& f, const FFElement& g) {
    if (f.n != g.n) throw std::invalid_argument("find_dependency: mismatched curves");
    const int n = f.n;
    double H = std::max({ff_complexity(f).H, ff_complexity(g).H, 1.0});
    long L = (long)std::ceil(4.0 * H * H * H);

    // dimension bookkeeping of the full L x L grid (never materialized): the
    // x-degree of any component of f^i g^j is at most (i + j)(df + dg + n)
    auto maxdeg = [](const FFElement& e) {
        int d = 0;
        for (const auto& c : e.comp)
            d = std::max({d, c.num.degree(), c.den.degree()});
        return (long)d;
    };
    long df = maxdeg(f), dg = maxdeg(g);
    long full_rows = (long)n * (2 * (L - 1) * (df + dg + (long)n) + 1);
    long full_cols = L * L;
    if (full_cols <= full_rows)
        throw std::logic_error("find_dependency: full system is not underdetermined");
    if (full_rows > (long)(2.0 * H * H * H * (double)L) * (df + dg + (long)n + 1))
        throw std::logic_error("find_dependency: row bound exceeded");

    // cached powers and monomials
    std::vector<FFElement> fp = {ff_const(n, QQ(1))}, gp = {ff_const(n, QQ(1))};
    auto fpow = [&](long i) -> const FFElement& {
        while ((long)fp.size() <= i) fp.push_back(ff_mul(fp.back(), f));
        return fp[(size_t)i];
    };
    auto gpow = [&](long j) -> const FFElement& {
        while ((long)gp.size() <= j) gp.push_back(ff_mul(gp.back(), g));
        return gp[(size_t)j];
    };

    for (long k = 1; k <= 2 * (L - 1); ++k) {
        // deterministic monomial order within the block i + j <= k
        std::vector<std::pair<long, long>> mons;
        for (long i = 0; i < L && i <= k; ++i)
            for (long j = 0; j < L && i + j <= k; ++j) mons.emplace_back(i, j);
        std::vector<FFElement> elts;
        elts.reserve(mons.size());
        for (auto& [i, j] : mons) elts.push_back(ff_mul(fpow(i), gpow(j)));

        // per-component common denominators
        std::vector<ZPoly> D((size_t)n, ZPoly(ZZ(1)));
        for (const auto& e : elts)
            for (int c = 0; c < n; ++c)
                if (!e.comp[(size_t)c].is_zero())
                    D[(size_t)c] = poly_lcm(D[(size_t)c], e.comp[(size_t)c].den);
        std::vector<ZPoly> nums((size_t)n * elts.size());
        std::vector<long> span((size_t)n, 0);
        for (size_t t = 0; t < elts.size(); ++t)
            for (int c = 0; c < n; ++c) {
                const FFFrac& fr = elts[t].comp[(size_t)c];
                if (fr.is_zero()) continue;
                ZPoly e = fr.num * D[(size_t)c].divexact(fr.den);
                span[(size_t)c] = std::max(span[(size_t)c], (long)e.degree() + 1);
                nums[t * (size_t)n + (size_t)c] = std::move(e);
            }
        size_t rows = 0;
        std::vector<size_t> off((size_t)n, 0);
        for (int c = 0; c < n; ++c) {
            off[(size_t)c] = rows;
            rows += (size_t)span[(size_t)c];
        }
        if (rows == 0) continue;
        IntMatrix M(rows, elts.size());
        for (size_t t = 0; t < elts.size(); ++t)
            for (int c = 0; c < n; ++c) {
                const ZPoly& e = nums[t * (size_t)n + (size_t)c];
                for (int dgr = 0; dgr <= e.degree(); ++dgr)
                    M.at(off[(size_t)c] + (size_t)dgr, t) = e.coeff((size_t)dgr);
            }
        auto kernel = integer_kernel(M);
        if (kernel.empty()) continue;
        const std::vector<ZZ>& v = kernel.front();

        // exact re-verification
        FFElement acc = ff_zero(n);
        for (size_t t = 0; t < elts.size(); ++t)
            if (v[t] != 0) acc = ff_add(acc, ff_mul(ff_const(n, QQ(v[t])), elts[t]));
        if (!acc.is_zero())
            throw std::logic_error("find_dependency: kernel vector fails re-verification");

        Dependency dep;
        dep.L = L;
        dep.H = H;
        dep.block = k;
        dep.rows_used = rows;
        dep.cols_used = elts.size();
        dep.coeffs = IntMatrix((size_t)k + 1, (size_t)k + 1);
        for (size_t t = 0; t < mons.size(); ++t)
            dep.coeffs.at((size_t)mons[t].first, (size_t)mons[t].second) = v[t];
        if (dep.cols_used > dep.rows_used) {
            double me = std::max(1.0, M.max_abs().get_d());
            dep.siegel_bound = ((double)rows / (double)(dep.cols_used - rows)) *
                               std::log((double)dep.cols_used * me);
        }
        return dep;
    }
    throw std::runtime_error("find_dependency: kernel unexpectedly trivial");
}

ComparisonConstants comparison_constants(const Dependency& dep, double H) {
    ComparisonConstants cc;
    cc.H = H;
    QQ h3 = QQ(mpq_class(H));
    cc.a = 4 * h3 * h3 * h3;
    long m = -1;
    for (size_t i = dep.coeffs.rows; i-- > 0;) {
        bool any = false;
        for (size_t j = 0; j < dep.coeffs.cols; ++j)
            if (dep.coeffs.at(i, j) != 0) any = true;
        if (any) {
            m = (long)i;
            break;
        }
    }
    if (m <= 0)
        throw std::runtime_error(
            "comparison_constants: every coefficient with positive f-exponent vanishes");
    cc.m = m;
    size_t j0 = 0;
    while (dep.coeffs.at((size_t)m, j0) == 0) ++j0;
    ZZ pivot = dep.coeffs.at((size_t)m, j0);
    QQ hmax(1);
    for (size_t i = 0; i < dep.coeffs.rows; ++i)
        for (size_t j = 0; j < dep.coeffs.cols; ++j) {
            const ZZ& c = dep.coeffs.at(i, j);
            if (c == 0) continue;
            QQ r = QQ(c) / pivot;
            QQ h = std::max(qabs(QQ(r.get_num())), QQ(r.get_den()));
            hmax = std::max(hmax, h);
        }
    cc.q = log_enclosure(hmax, 64);
    QIv logH = log_enclosure(QQ(mpq_class(H)), 64);
    QIv log2 = log_enclosure(QQ(2), 64);
    cc.b = cc.q + logH * QQ(6) + log2 * QQ(5);
    return cc;
}

ComparisonReport verify_comparison(const FFElement& f, const FFElement& g,
                                   const std::vector<CurvePoint>& pts,
                                   const ComparisonConstants& cc, const QQ& precision) {
    ComparisonReport rep;
    rep.a = cc.a;
    rep.b = cc.b;
    for (const auto& Q : pts) {
        ComparisonCheck ck;
        ck.hf = height_point(ff_evaluate(f, Q), precision);
        ck.hg = height_point(ff_evaluate(g, Q), precision);
        ck.violated = ck.hf.lo > ck.hg.hi * cc.a + cc.b.hi;
        if (ck.violated) rep.ok = false;
        rep.checks.push_back(ck);
    }
    return rep;
}

}  // namespace abctk
