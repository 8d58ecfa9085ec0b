#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abctk {

using ZZ = mpz_class;
using QQ = mpq_class;

inline ZZ zgcd(const ZZ& a, const ZZ& b) {
    ZZ r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline ZZ zlcm(const ZZ& a, const ZZ& b) {
    ZZ r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline ZZ zpow(const ZZ& a, unsigned long e) {
    ZZ r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

inline ZZ zabs(const ZZ& a) { return a < 0 ? ZZ(-a) : a; }
inline QQ qabs(const QQ& a) { return a < 0 ? QQ(-a) : a; }

// exact a/b, aborts if not divisible (internal invariant)
inline ZZ zdivexact(const ZZ& a, const ZZ& b) {
    ZZ r;
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool is_prime(const ZZ& p) {
    return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

// v_p of a nonzero integer
inline long zval(const ZZ& a, const ZZ& p) {
    ZZ t = zabs(a);
    long v = 0;
    while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
        t = zdivexact(t, p);
        ++v;
    }
    return v;
}

// v_p of a nonzero rational
inline long qval(const QQ& a, const ZZ& p) {
    return zval(a.get_num(), p) - zval(a.get_den(), p);
}

inline QQ qpow(const QQ& a, long e) {
    QQ r;
    if (e >= 0) {
        mpz_pow_ui(r.get_num().get_mpz_t(), a.get_num().get_mpz_t(), (unsigned long)e);
        mpz_pow_ui(r.get_den().get_mpz_t(), a.get_den().get_mpz_t(), (unsigned long)e);
    } else {
        mpz_pow_ui(r.get_num().get_mpz_t(), a.get_den().get_mpz_t(), (unsigned long)(-e));
        mpz_pow_ui(r.get_den().get_mpz_t(), a.get_num().get_mpz_t(), (unsigned long)(-e));
    }
    r.canonicalize();
    return r;
}

// distinct prime factorization by trial division + Pollard rho (desk-scale inputs)
std::vector<std::pair<ZZ, long>> factor_integer(ZZ n);
ZZ radical(const ZZ& n);

// primes in [2, bound)
std::vector<unsigned long> primes_below(unsigned long bound);

std::string zz_to_string(const ZZ& a);
std::string qq_to_string(const QQ& a);
std::optional<QQ> parse_rational(const std::string& s);

}  // namespace abctk
