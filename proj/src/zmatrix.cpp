#include "abctk/zmatrix.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace abctk {

ZZ IntMatrix::max_abs() const {
    ZZ m = 0;
    for (auto& x : a) m = std::max(m, zabs(x));
    return m;
}

namespace {

std::vector<ZZ> make_primitive(std::vector<QQ> v) {
    ZZ l = 1;
    for (auto& q : v) l = zlcm(l, q.get_den());
    std::vector<ZZ> out(v.size());
    ZZ g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = ZZ(v[i] * QQ(l));
        g = zgcd(g, out[i]);
    }
    if (g > 1)
        for (auto& x : out) x = zdivexact(x, g);
    // deterministic sign: first nonzero entry positive
    for (auto& x : out) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : out) y = -y;
        break;
    }
    return out;
}

QQ dot(const std::vector<ZZ>& a, const std::vector<QQ>& b) {
    QQ s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += QQ(a[i]) * b[i];
    return s;
}

ZZ round_q(const QQ& q) {
    // nearest integer, ties toward zero
    ZZ n = q.get_num(), d = q.get_den();
    ZZ r;
    ZZ two_n = 2 * n + (n >= 0 ? d : ZZ(-d));
    ZZ two_d = 2 * d;
    mpz_fdiv_q(r.get_mpz_t(), two_n.get_mpz_t(), two_d.get_mpz_t());
    return r;
}

// exact-arithmetic LLL, delta = 99/100; small bases only
void lll_reduce(std::vector<std::vector<ZZ>>& b) {
    size_t n = b.size();
    if (n <= 1) return;
    auto gram_schmidt = [&](std::vector<std::vector<QQ>>& star,
                            std::vector<std::vector<QQ>>& mu, std::vector<QQ>& B) {
        size_t dim = b[0].size();
        star.assign(n, std::vector<QQ>(dim));
        mu.assign(n, std::vector<QQ>(n, QQ(0)));
        B.assign(n, QQ(0));
        for (size_t i = 0; i < n; ++i) {
            for (size_t k = 0; k < dim; ++k) star[i][k] = QQ(b[i][k]);
            for (size_t j = 0; j < i; ++j) {
                mu[i][j] = B[j] == 0 ? QQ(0) : dot(b[i], star[j]) / B[j];
                for (size_t k = 0; k < dim; ++k) star[i][k] -= mu[i][j] * star[j][k];
            }
            for (size_t k = 0; k < dim; ++k) B[i] += star[i][k] * star[i][k];
        }
    };
    std::vector<std::vector<QQ>> star, mu;
    std::vector<QQ> B;
    gram_schmidt(star, mu, B);
    const QQ delta(99, 100);
    size_t k = 1;
    size_t guard = 0, guard_max = 10000;
    while (k < n && guard++ < guard_max) {
        // size-reduce b[k] against b[j], j < k
        for (size_t j = k; j-- > 0;) {
            ZZ r = round_q(mu[k][j]);
            if (r != 0) {
                for (size_t t = 0; t < b[k].size(); ++t) b[k][t] -= r * b[j][t];
                gram_schmidt(star, mu, B);
            }
        }
        if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gram_schmidt(star, mu, B);
            k = k > 1 ? k - 1 : 1;
        }
    }
}

}  // namespace

std::vector<std::vector<ZZ>> integer_kernel(const IntMatrix& M) {
    size_t R = M.rows, C = M.cols;
    // integer row reduction of [Mᵀ | I]: rows whose left block vanishes give a
    // basis of the full (saturated) kernel lattice in the right block
    std::vector<std::vector<ZZ>> A(C, std::vector<ZZ>(R)), T(C, std::vector<ZZ>(C, ZZ(0)));
    for (size_t i = 0; i < C; ++i) {
        for (size_t j = 0; j < R; ++j) A[i][j] = M.at(j, i);
        T[i][i] = 1;
    }
    size_t r = 0;
    for (size_t j = 0; j < R && r < C; ++j) {
        // Euclid among rows i ≥ r until one nonzero entry remains in column j
        while (true) {
            size_t best = C;
            for (size_t i = r; i < C; ++i)
                if (A[i][j] != 0 && (best == C || zabs(A[i][j]) < zabs(A[best][j]))) best = i;
            if (best == C) break;
            bool done = true;
            for (size_t i = r; i < C; ++i) {
                if (i == best || A[i][j] == 0) continue;
                ZZ q;
                mpz_fdiv_q(q.get_mpz_t(), A[i][j].get_mpz_t(), A[best][j].get_mpz_t());
                if (q != 0) {
                    for (size_t t = 0; t < R; ++t) A[i][t] -= q * A[best][t];
                    for (size_t t = 0; t < C; ++t) T[i][t] -= q * T[best][t];
                }
                if (A[i][j] != 0) done = false;
            }
            if (done) {
                std::swap(A[best], A[r]);
                std::swap(T[best], T[r]);
                ++r;
                break;
            }
        }
    }
    std::vector<std::vector<ZZ>> basis;
    for (size_t i = r; i < C; ++i) {
        bool zero = true;
        for (size_t j = 0; j < R; ++j)
            if (A[i][j] != 0) { zero = false; break; }
        if (zero) basis.push_back(T[i]);
    }
    if (basis.size() > 1 && basis.size() <= 48 && C <= 256) lll_reduce(basis);
    // polish: for small kernels, search short combinations with coefficients in
    // [-2,2]; substitute into the basis when a unit coefficient keeps it a basis
    if (size_t k = basis.size(); k >= 2 && k <= 6) {
        auto maxnorm = [](const std::vector<ZZ>& v) {
            ZZ m = 0;
            for (auto& x : v) m = std::max(m, zabs(x));
            return m;
        };
        std::vector<long> c(k, -2);
        std::vector<ZZ> best;
        std::vector<long> bestc;
        while (true) {
            bool nonzero = false;
            for (auto x : c) nonzero |= x != 0;
            if (nonzero) {
                std::vector<ZZ> v(C, ZZ(0));
                for (size_t i = 0; i < k; ++i)
                    if (c[i])
                        for (size_t j = 0; j < C; ++j) v[j] += c[i] * basis[i][j];
                if (best.empty() || maxnorm(v) < maxnorm(best)) { best = v; bestc = c; }
            }
            size_t i = 0;
            while (i < k && c[i] == 2) c[i++] = -2;
            if (i == k) break;
            ++c[i];
        }
        if (!best.empty() && maxnorm(best) < maxnorm(basis[0])) {
            for (size_t i = 0; i < k; ++i)
                if (bestc[i] == 1 || bestc[i] == -1) { basis[i] = best; break; }
        }
    }
    for (auto& v : basis) {
        ZZ g = 0;
        for (auto& x : v) g = zgcd(g, x);
        if (g > 1)
            for (auto& x : v) x = zdivexact(x, g);
        for (auto& x : v) {
            if (x == 0) continue;
            if (x < 0)
                for (auto& y : v) y = -y;
            break;
        }
    }
    std::sort(basis.begin(), basis.end(), [](const auto& a, const auto& b) {
        ZZ ma = 0, mb = 0;
        for (auto& x : a) ma = std::max(ma, zabs(x));
        for (auto& x : b) mb = std::max(mb, zabs(x));
        if (ma != mb) return ma < mb;
        return a < b;
    });
    return basis;
}

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

struct Fp64 {
    u64 p;
    u64 mul(u64 a, u64 b) const { return (u64)((u128)a * b % p); }
    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p ? s - p : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
    u64 pow(u64 a, u64 e) const {
        u64 r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }
};

struct SparseModRow {
    std::vector<std::pair<size_t, u64>> e;  // sorted by col
};

// eliminate mod p; returns per-column pivot row index (-1 if free) and the
// final reduced rows (each with distinct leading column)
bool sparse_eliminate(const std::vector<SparseRow>& rows, size_t cols, const Fp64& F,
                      std::vector<SparseModRow>& reduced, std::vector<long>& pivot_of_col) {
    std::vector<SparseModRow> work(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (auto& [c, v] : rows[i].entries) {
            ZZ m;
            mpz_mod_ui(m.get_mpz_t(), v.get_mpz_t(), F.p);
            u64 mv = mpz_get_ui(m.get_mpz_t());
            if (mv) work[i].e.push_back({c, mv});
        }
    }
    pivot_of_col.assign(cols, -1);
    reduced.clear();
    // bucket rows by leading column, smallest row first (Markowitz-lite)
    std::vector<std::vector<size_t>> bucket(cols);
    for (size_t i = 0; i < work.size(); ++i)
        if (!work[i].e.empty()) bucket[work[i].e.front().first].push_back(i);
    for (size_t j = 0; j < cols; ++j) {
        while (!bucket[j].empty()) {
            // pick shortest row as pivot
            size_t best = 0;
            for (size_t t = 1; t < bucket[j].size(); ++t)
                if (work[bucket[j][t]].e.size() < work[bucket[j][best]].e.size()) best = t;
            size_t pr = bucket[j][best];
            if (pivot_of_col[j] < 0) {
                pivot_of_col[j] = (long)reduced.size();
                reduced.push_back(work[pr]);
                work[pr].e.clear();
                bucket[j].erase(bucket[j].begin() + (long)best);
                continue;
            }
            // eliminate leading entry against the pivot row
            bucket[j].erase(bucket[j].begin() + (long)best);
            const SparseModRow& pv = reduced[(size_t)pivot_of_col[j]];
            SparseModRow& rw = work[pr];
            u64 factor = F.mul(rw.e.front().second, F.inv(pv.e.front().second));
            SparseModRow merged;
            merged.e.reserve(rw.e.size() + pv.e.size());
            size_t ia = 0, ib = 0;
            while (ia < rw.e.size() || ib < pv.e.size()) {
                if (ib == pv.e.size() || (ia < rw.e.size() && rw.e[ia].first < pv.e[ib].first)) {
                    merged.e.push_back(rw.e[ia++]);
                } else if (ia == rw.e.size() || pv.e[ib].first < rw.e[ia].first) {
                    merged.e.push_back({pv.e[ib].first, F.sub(0, F.mul(factor, pv.e[ib].second))});
                    ++ib;
                } else {
                    u64 v = F.sub(rw.e[ia].second, F.mul(factor, pv.e[ib].second));
                    if (v) merged.e.push_back({rw.e[ia].first, v});
                    ++ia; ++ib;
                }
            }
            rw = std::move(merged);
            if (!rw.e.empty()) bucket[rw.e.front().first].push_back(pr);
        }
    }
    return true;
}

// kernel vector mod p with x[free_col] = 1 (all other free columns 0)
std::vector<u64> kernel_mod_p(const std::vector<SparseModRow>& reduced,
                              const std::vector<long>& pivot_of_col, size_t cols,
                              size_t free_col, const Fp64& F) {
    std::vector<u64> x(cols, 0);
    x[free_col] = 1;
    for (size_t jj = cols; jj-- > 0;) {
        if (pivot_of_col[jj] < 0) continue;
        const SparseModRow& row = reduced[(size_t)pivot_of_col[jj]];
        u64 s = 0;
        for (size_t t = 1; t < row.e.size(); ++t)
            s = F.add(s, F.mul(row.e[t].second, x[row.e[t].first]));
        x[jj] = F.mul(F.sub(0, s), F.inv(row.e.front().second));
    }
    return x;
}

// rational reconstruction: n/d ≡ a (mod m), |n|, d ≤ sqrt(m/2); empty on failure
bool rat_recon(const ZZ& a, const ZZ& m, QQ& out) {
    ZZ bound;
    mpz_sqrt(bound.get_mpz_t(), ZZ(m / 2).get_mpz_t());
    ZZ r0 = m, r1 = a % m, t0 = 0, t1 = 1;
    if (r1 < 0) r1 += m;
    while (r1 > bound) {
        ZZ q = r0 / r1;
        ZZ r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1; r1 = r2; t0 = t1; t1 = t2;
    }
    if (t1 == 0 || zabs(t1) > bound) return false;
    if (zgcd(zabs(t1), r1) != 1 && r1 != 0) {
        // common factor: reconstruction unreliable
        if (zgcd(zabs(t1), zgcd(r1, m)) != 1) return false;
    }
    out = QQ(r1) / QQ(t1);
    out.canonicalize();
    return true;
}

}  // namespace

std::vector<ZZ> sparse_kernel_vector(const std::vector<SparseRow>& rows, size_t cols) {
    static const u64 PRIMES[] = {
        1152921504606847009ull, 1152921504606847067ull, 1152921504606847081ull,
        1152921504606847123ull, 1152921504606847127ull, 1152921504606847151ull,
        1152921504606847169ull, 1152921504606847177ull, 1152921504606847219ull,
        1152921504606847279ull,
    };
    // structure pass with the first prime: find a free column
    Fp64 F0{PRIMES[0]};
    std::vector<SparseModRow> red0;
    std::vector<long> piv0;
    sparse_eliminate(rows, cols, F0, red0, piv0);
    long free_col = -1;
    for (size_t j = 0; j < cols; ++j)
        if (piv0[j] < 0) { free_col = (long)j; break; }
    if (free_col < 0) return {};  // trivial kernel (mod p certificate; exact check below)
    ZZ modulus = 0;
    std::vector<ZZ> crt(cols, ZZ(0));
    for (size_t pi = 0; pi < sizeof(PRIMES) / sizeof(PRIMES[0]); ++pi) {
        Fp64 F{PRIMES[pi]};
        std::vector<SparseModRow> red;
        std::vector<long> piv;
        if (pi == 0) {
            red = std::move(red0);
            piv = std::move(piv0);
        } else {
            sparse_eliminate(rows, cols, F, red, piv);
            if (piv[(size_t)free_col] >= 0) continue;  // unlucky prime
        }
        auto x = kernel_mod_p(red, piv, cols, (size_t)free_col, F);
        ZZ p(PRIMES[pi]);
        if (modulus == 0) {
            for (size_t j = 0; j < cols; ++j) crt[j] = ZZ(x[j]);
            modulus = p;
        } else {
            // CRT combine
            ZZ minv;
            mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t());
            for (size_t j = 0; j < cols; ++j) {
                ZZ diff = (ZZ(x[j]) - crt[j]) % p;
                if (diff < 0) diff += p;
                crt[j] = crt[j] + modulus * ((diff * minv) % p);
            }
            modulus *= p;
        }
        // attempt rational reconstruction + exact verification
        std::vector<QQ> v(cols);
        bool ok = true;
        for (size_t j = 0; j < cols && ok; ++j) ok = rat_recon(crt[j], modulus, v[j]);
        if (!ok) continue;
        std::vector<ZZ> cand = make_primitive(std::move(v));
        bool zero = true;
        for (auto& row : rows) {
            ZZ s = 0;
            for (auto& [c, val] : row.entries) s += val * cand[c];
            if (s != 0) { zero = false; break; }
        }
        if (zero) return cand;
    }
    return {};
}

}  // namespace abctk
