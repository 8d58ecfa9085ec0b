#include "abctk/fp.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace abctk {

namespace {
ZZ mod(const ZZ& a, const ZZ& p) {
    ZZ r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    return r;
}
ZZ inv_mod(const ZZ& a, const ZZ& p) {
    ZZ r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()))
        throw std::domain_error("inv_mod: not invertible");
    return r;
}
}  // namespace

FpPoly fp_trim(FpPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int fp_degree(const FpPoly& f) { return (int)f.size() - 1; }

FpPoly fp_reduce(const ZPoly& f, const ZZ& p) {
    FpPoly out(f.coeffs().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = mod(f.coeff(i), p);
    return fp_trim(std::move(out));
}

ZPoly fp_lift(const FpPoly& f) { return ZPoly(std::vector<ZZ>(f.begin(), f.end())); }

FpPoly fp_scale(const FpPoly& f, const ZZ& s, const ZZ& p) {
    FpPoly out(f.size());
    for (size_t i = 0; i < f.size(); ++i) out[i] = mod(f[i] * s, p);
    return fp_trim(std::move(out));
}

FpPoly fp_monic(const FpPoly& f, const ZZ& p) {
    if (f.empty()) return f;
    return fp_scale(f, inv_mod(f.back(), p), p);
}

FpPoly fp_add(const FpPoly& a, const FpPoly& b, const ZZ& p) {
    FpPoly out(std::max(a.size(), b.size()), ZZ(0));
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = mod(out[i] + b[i], p);
    return fp_trim(std::move(out));
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b, const ZZ& p) {
    FpPoly out(std::max(a.size(), b.size()), ZZ(0));
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = mod(out[i] - b[i], p);
    return fp_trim(std::move(out));
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const ZZ& p) {
    if (a.empty() || b.empty()) return {};
    FpPoly out(a.size() + b.size() - 1, ZZ(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    for (auto& c : out) c = mod(c, p);
    return fp_trim(std::move(out));
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b, const ZZ& p) {
    if (b.empty()) throw std::invalid_argument("fp_divmod: zero divisor");
    if (a.size() < b.size()) return {{}, a};
    FpPoly r = a, q(a.size() - b.size() + 1, ZZ(0));
    ZZ linv = inv_mod(b.back(), p);
    for (size_t i = q.size(); i-- > 0;) {
        ZZ c = mod(r[i + b.size() - 1] * linv, p);
        q[i] = c;
        if (c != 0)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] = mod(r[i + j] - c * b[j], p);
    }
    r.resize(b.size() - 1);
    return {fp_trim(std::move(q)), fp_trim(std::move(r))};
}

FpPoly fp_gcd(FpPoly a, FpPoly b, const ZZ& p) {
    while (!b.empty()) {
        auto [q, r] = fp_divmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(a, p);
}

std::tuple<FpPoly, FpPoly, FpPoly> fp_xgcd(const FpPoly& a, const FpPoly& b, const ZZ& p) {
    FpPoly r0 = a, r1 = b, s0 = {ZZ(1)}, s1 = {}, t0 = {}, t1 = {ZZ(1)};
    while (!r1.empty()) {
        auto [q, r] = fp_divmod(r0, r1, p);
        FpPoly s = fp_sub(s0, fp_mul(q, s1, p), p);
        FpPoly t = fp_sub(t0, fp_mul(q, t1, p), p);
        r0 = std::move(r1); r1 = std::move(r);
        s0 = std::move(s1); s1 = std::move(s);
        t0 = std::move(t1); t1 = std::move(t);
    }
    if (r0.empty()) return {r0, s0, t0};
    ZZ linv = inv_mod(r0.back(), p);
    return {fp_scale(r0, linv, p), fp_scale(s0, linv, p), fp_scale(t0, linv, p)};
}

FpPoly fp_powmod(const FpPoly& base, const ZZ& e, const FpPoly& m, const ZZ& p) {
    FpPoly r = {ZZ(1)}, b = fp_divmod(base, m, p).second;
    ZZ k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = fp_divmod(fp_mul(r, b, p), m, p).second;
        b = fp_divmod(fp_mul(b, b, p), m, p).second;
        k >>= 1;
    }
    return r;
}

FpPoly fp_derivative(const FpPoly& f, const ZZ& p) {
    if (f.size() <= 1) return {};
    FpPoly out(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) out[i - 1] = mod(f[i] * (long)i, p);
    return fp_trim(std::move(out));
}

namespace {

// distinct-degree: returns (product-of-irreducibles-of-degree-d, d) parts
std::vector<std::pair<FpPoly, int>> ddf(FpPoly f, const ZZ& p) {
    std::vector<std::pair<FpPoly, int>> out;
    FpPoly h = {ZZ(0), ZZ(1)};  // x
    int d = 0;
    while (fp_degree(f) >= 2 * (d + 1)) {
        ++d;
        h = fp_powmod(h, p, f, p);
        FpPoly g = fp_gcd(fp_sub(h, {ZZ(0), ZZ(1)}, p), f, p);
        if (fp_degree(g) > 0) {
            out.push_back({g, d});
            f = fp_divmod(f, g, p).first;
            h = fp_divmod(h, f, p).second;
        }
    }
    if (fp_degree(f) > 0) out.push_back({f, fp_degree(f)});
    return out;
}

// equal-degree splitting (Cantor–Zassenhaus), deterministic rng
void edf(const FpPoly& f, int d, const ZZ& p, gmp_randclass& rng, std::vector<FpPoly>& out) {
    int n = fp_degree(f);
    if (n == d) {
        out.push_back(fp_monic(f, p));
        return;
    }
    FpPoly g;
    while (true) {
        FpPoly a(n);
        for (auto& c : a) c = rng.get_z_range(p);
        a = fp_trim(std::move(a));
        if (fp_degree(a) < 1) continue;
        if (p == 2) {
            // trace map: a + a^2 + a^4 + ... + a^(2^(d-1)) mod f
            FpPoly t = a, s = a;
            for (int i = 1; i < d; ++i) {
                s = fp_powmod(s, ZZ(2), f, p);
                t = fp_add(t, s, p);
            }
            g = fp_gcd(t, f, p);
        } else {
            ZZ e = (zpow(p, (unsigned long)d) - 1) / 2;
            FpPoly b = fp_powmod(a, e, f, p);
            g = fp_gcd(fp_sub(b, {ZZ(1)}, p), f, p);
        }
        if (fp_degree(g) > 0 && fp_degree(g) < n) break;
    }
    edf(g, d, p, rng, out);
    edf(fp_divmod(f, g, p).first, d, p, rng, out);
}

void factor_squarefree_fp(const FpPoly& f, const ZZ& p, gmp_randclass& rng,
                          std::vector<FpPoly>& out) {
    for (auto& [part, d] : ddf(f, p)) edf(part, d, p, rng, out);
}

}  // namespace

std::vector<std::pair<ZPoly, int>> factor_mod_p(const ZPoly& f, const ZZ& p) {
    if (!is_prime(p)) throw std::invalid_argument("factor_mod_p: composite modulus");
    if (mpz_divisible_p(f.lc().get_mpz_t(), p.get_mpz_t()))
        throw std::invalid_argument("factor_mod_p: p divides leading coefficient");
    FpPoly g = fp_monic(fp_reduce(f, p), p);
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0x5ee0f2ul);
    std::vector<std::pair<FpPoly, int>> work;  // (factor, multiplicity)
    {
        // squarefree decomposition; derivative == 0 means h = u(x^p), recurse on u
        std::vector<std::pair<FpPoly, int>> sqf;  // (squarefree factor, multiplicity)
        std::function<void(FpPoly, int)> yun = [&](FpPoly h, int mult) {
            if (fp_degree(h) <= 0) return;
            FpPoly d = fp_derivative(h, p);
            if (d.empty()) {
                unsigned long pe = mpz_get_ui(p.get_mpz_t());
                FpPoly u(((size_t)fp_degree(h)) / pe + 1);
                for (size_t i = 0; i < u.size(); ++i) u[i] = h[i * pe];
                yun(fp_trim(std::move(u)), mult * (int)pe);
                return;
            }
            FpPoly c = fp_gcd(h, d, p);
            FpPoly w = fp_divmod(h, c, p).first;
            int i = 1;
            while (fp_degree(w) > 0) {
                FpPoly y = fp_gcd(w, c, p);
                FpPoly fac = fp_divmod(w, y, p).first;
                if (fp_degree(fac) > 0) sqf.push_back({fp_monic(fac, p), mult * i});
                c = fp_divmod(c, y, p).first;
                w = std::move(y);
                ++i;
            }
            if (fp_degree(c) > 0) yun(c, mult);
        };
        yun(g, 1);
        for (auto& [h, mult] : sqf) {
            std::vector<FpPoly> parts;
            factor_squarefree_fp(h, p, rng, parts);
            for (auto& q : parts) work.push_back({q, mult});
        }
    }
    std::vector<std::pair<ZPoly, int>> out;
    for (auto& [q, mult] : work) out.push_back({fp_lift(q), mult});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.coeffs() < b.first.coeffs();
    });
    return out;
}

}  // namespace abctk
