#include "abctk/fp.hpp"
#include "abctk/zpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace abctk {

namespace {

// symmetric representative in (-m/2, m/2]
ZZ sym(const ZZ& a, const ZZ& m) {
    ZZ r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    if (r * 2 > m) r -= m;
    return r;
}

ZPoly sym_poly(const FpPoly& f, const ZZ& m) {
    std::vector<ZZ> c(f.size());
    for (size_t i = 0; i < f.size(); ++i) c[i] = sym(f[i], m);
    return ZPoly(std::move(c));
}

// Quadratic Hensel lifting of f ≡ lc(f)·∏ factors (mod p) to modulus Q = p^(2^k),
// multifactor via binary splitting. On return factors[i] are monic mod Q.
struct Lifter {
    ZZ p, Q;

    // one quadratic step: f ≡ g·h, s·g + t·h ≡ 1 (mod q)  →  same mod q²
    static void step(const ZPoly& f, FpPoly& g, FpPoly& h, FpPoly& s, FpPoly& t,
                     const ZZ& q) {
        ZZ q2 = q * q;
        FpPoly e = fp_sub(fp_reduce(f, q2), fp_mul(g, h, q2), q2);
        auto [qq, r] = fp_divmod(fp_mul(s, e, q2), h, q2);
        FpPoly gn = fp_add(g, fp_add(fp_mul(t, e, q2), fp_mul(qq, g, q2), q2), q2);
        FpPoly hn = fp_add(h, r, q2);
        FpPoly b = fp_sub(fp_add(fp_mul(s, gn, q2), fp_mul(t, hn, q2), q2), {ZZ(1)}, q2);
        auto [cc, d] = fp_divmod(fp_mul(s, b, q2), hn, q2);
        s = fp_sub(s, d, q2);
        t = fp_sub(t, fp_add(fp_mul(t, b, q2), fp_mul(cc, gn, q2), q2), q2);
        g = std::move(gn);
        h = std::move(hn);
    }

    void lift(const ZPoly& f, std::vector<FpPoly>& factors, size_t lo, size_t hi) {
        if (hi - lo == 1) {
            factors[lo] = fp_monic(fp_reduce(f, Q), Q);
            return;
        }
        size_t mid = lo + (hi - lo) / 2;
        FpPoly g = {ZZ(1)}, h = {ZZ(1)};
        for (size_t i = lo; i < mid; ++i) g = fp_mul(g, factors[i], p);
        for (size_t i = mid; i < hi; ++i) h = fp_mul(h, factors[i], p);
        auto [d, s, t] = fp_xgcd(g, h, p);
        if (fp_degree(d) != 0) throw std::logic_error("hensel: modular factors not coprime");
        ZZ lcf, lcinv;
        mpz_mod(lcf.get_mpz_t(), f.lc().get_mpz_t(), p.get_mpz_t());
        mpz_invert(lcinv.get_mpz_t(), lcf.get_mpz_t(), p.get_mpz_t());
        g = fp_scale(g, lcf, p);      // g·h ≡ f (mod p), h monic
        s = fp_scale(s, lcinv, p);    // keep s·g + t·h ≡ 1
        ZZ q = p;
        while (q < Q) {
            step(f, g, h, s, t, q);
            q = q * q;
        }
        lift(sym_poly(g, Q), factors, lo, mid);
        lift(sym_poly(h, Q), factors, mid, hi);
    }
};

// Mignotte-style bound: 2·(2^(d+1)·||f||₂·|lc|) + 1 covers symmetric coefficients
// of lc·(any monic factor)
ZZ factor_coeff_bound(const ZPoly& f) {
    ZZ n2 = 0;
    for (auto& c : f.coeffs()) n2 += c * c;
    ZZ norm;
    mpz_sqrt(norm.get_mpz_t(), n2.get_mpz_t());
    norm += 1;
    return zpow(ZZ(2), (unsigned long)f.degree() + 2) * norm * zabs(f.lc()) + 1;
}

// factor a primitive squarefree polynomial of degree ≥ 1 into primitive irreducibles
std::vector<ZPoly> factor_squarefree(const ZPoly& f) {
    if (f.degree() == 1) return {f};
    ZZ p = 2;
    ZZ disc = zabs(resultant(f, f.derivative()));
    while (mpz_divisible_p(f.lc().get_mpz_t(), p.get_mpz_t()) ||
           mpz_divisible_p(disc.get_mpz_t(), p.get_mpz_t()))
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    auto fac_p = factor_mod_p(f, p);
    if (fac_p.size() == 1) return {f};
    std::vector<FpPoly> pool(fac_p.size());
    for (size_t i = 0; i < fac_p.size(); ++i) pool[i] = fp_reduce(fac_p[i].first, p);
    ZZ bound = factor_coeff_bound(f);
    Lifter lifter{p, p};
    while (lifter.Q < bound) lifter.Q = lifter.Q * lifter.Q;
    lifter.lift(f, pool, 0, pool.size());
    const ZZ& Q = lifter.Q;

    std::vector<ZPoly> out;
    ZPoly rest = f;
    size_t k = 1;
    while (2 * k <= pool.size()) {
        bool found = false;
        std::vector<size_t> idx(k);
        for (size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            ZZ lcq;
            mpz_mod(lcq.get_mpz_t(), rest.lc().get_mpz_t(), Q.get_mpz_t());
            FpPoly cand = {lcq};
            for (size_t i : idx) cand = fp_mul(cand, pool[i], Q);
            ZPoly c = sym_poly(cand, Q).primitive_part();
            if (c.degree() >= 1 && rest.divides(c)) {
                out.push_back(c);
                rest = rest.divexact(c).primitive_part();
                std::vector<FpPoly> np;
                for (size_t i = 0, j = 0; i < pool.size(); ++i) {
                    if (j < idx.size() && idx[j] == i) { ++j; continue; }
                    np.push_back(pool[i]);
                }
                pool = std::move(np);
                found = true;
                break;
            }
            // next k-combination of pool indices
            size_t i = k;
            bool advanced = false;
            while (i-- > 0) {
                if (idx[i] != i + pool.size() - k) {
                    ++idx[i];
                    for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
        if (!found) ++k;
    }
    if (rest.degree() > 0) out.push_back(rest.primitive_part());
    return out;
}

}  // namespace

std::vector<std::pair<ZPoly, int>> factor_over_int(const ZPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("factor_over_int: zero polynomial");
    std::vector<std::pair<ZPoly, int>> out;
    ZPoly g = f.primitive_part();
    ZPoly s = squarefree_part(g);
    if (s.degree() > 0) {
        for (auto& irr : factor_squarefree(s)) {
            int e = 0;
            ZPoly r = g;
            while (!r.is_zero() && r.degree() >= irr.degree() && r.divides(irr)) {
                r = r.divexact(irr).primitive_part();
                ++e;
            }
            out.push_back({irr, e});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.coeffs() < b.first.coeffs();
    });
    return out;
}

bool is_irreducible(const ZPoly& f) {
    if (f.degree() < 1) return false;
    auto fac = factor_over_int(f);
    return fac.size() == 1 && fac[0].second == 1 && fac[0].first.degree() == f.degree();
}

}  // namespace abctk
