#pragma once

#include "abctk/zpoly.hpp"

#include <stdexcept>
#include <vector>

namespace abctk {

// arithmetic in Q[t]/(m), the number field generated by a root of m
struct NFCtx {
    QPoly m;  // the minimal polynomial of γ, as a rational polynomial

    QPoly reduce(const QPoly& a) const { return qpoly_divmod(a, m).second; }

    QPoly mul(const QPoly& a, const QPoly& b) const { return reduce(a * b); }

    QPoly inv(const QPoly& a) const {
        // extended Euclid over Q[t]
        QPoly r0 = m, r1 = reduce(a), s0, s1(ZPoly(ZZ(1)));
        if (r1.is_zero()) throw std::domain_error("nf inverse of zero");
        while (!r1.is_zero()) {
            auto [q, r] = qpoly_divmod(r0, r1);
            QPoly s = s0 - q * s1;
            r0 = r1; r1 = r;
            s0 = s1; s1 = s;
        }
        if (r0.degree() != 0) throw std::logic_error("nf inverse: reducible modulus");
        return reduce(s0 * QPoly(QQ(1) / r0.coeff(0)));
    }

    QPoly pow(QPoly a, unsigned long e) const {
        QPoly r{QQ(1)};
        a = reduce(a);
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

// polynomial in a second variable over the number field, lowest degree first
using NFPoly = std::vector<QPoly>;

inline int nf_deg(const NFPoly& A) {
    for (size_t i = A.size(); i-- > 0;)
        if (!A[i].is_zero()) return (int)i;
    return -1;
}

inline NFPoly nf_trim(NFPoly A) {
    while (!A.empty() && A.back().is_zero()) A.pop_back();
    return A;
}

inline NFPoly nf_rem(const NFPoly& a, const NFPoly& b, const NFCtx& K) {
    NFPoly r = a;
    int db = nf_deg(b);
    QPoly linv = K.inv(b[(size_t)db]);
    while (nf_deg(r) >= db) {
        int dr = nf_deg(r);
        QPoly c = K.mul(r[(size_t)dr], linv);
        for (int j = 0; j <= db; ++j)
            r[(size_t)(dr - db + j)] = K.reduce(r[(size_t)(dr - db + j)] - K.mul(c, b[(size_t)j]));
        r = nf_trim(std::move(r));
        if (nf_deg(r) >= dr) throw std::logic_error("nf_rem: leading term failed to cancel");
    }
    return r;
}

inline NFPoly nf_gcd(NFPoly a, NFPoly b, const NFCtx& K) {
    while (nf_deg(b) >= 0) {
        NFPoly r = nf_rem(a, b, K);
        a = std::move(b);
        b = std::move(r);
    }
    // monic normalization
    int d = nf_deg(a);
    if (d >= 0) {
        QPoly linv = K.inv(a[(size_t)d]);
        for (auto& c : a) c = K.mul(c, linv);
    }
    return a;
}

}  // namespace abctk
