#include "abctk/zz.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace abctk {

namespace {

ZZ pollard_rho(const ZZ& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xabc17ul);
    while (true) {
        ZZ c = rng.get_z_range(n - 1) + 1;
        ZZ x = rng.get_z_range(n), y = x, d = 1;
        auto step = [&](const ZZ& v) -> ZZ { return (v * v + c) % n; };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            d = zgcd(zabs(x - y), n);
        }
        if (d != n) return d;
    }
}

void factor_rec(const ZZ& n, std::map<ZZ, long>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    ZZ d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(zdivexact(n, d), out);
}

}  // namespace

std::vector<std::pair<ZZ, long>> factor_integer(ZZ n) {
    if (n == 0) throw std::invalid_argument("factor_integer: zero");
    n = zabs(n);
    std::map<ZZ, long> acc;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            acc[ZZ(p)]++;
            n = zdivexact(n, ZZ(p));
        }
    }
    factor_rec(n, acc);
    return {acc.begin(), acc.end()};
}

ZZ radical(const ZZ& n) {
    ZZ r = 1;
    for (auto& [p, e] : factor_integer(n)) r *= p;
    return r;
}

std::vector<unsigned long> primes_below(unsigned long bound) {
    std::vector<bool> sieve(bound, true);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i < bound; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (unsigned long j = i * i; j < bound; j += i) sieve[j] = false;
    }
    return out;
}

std::string zz_to_string(const ZZ& a) { return a.get_str(); }
std::string qq_to_string(const QQ& a) { return a.get_str(); }

std::optional<QQ> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::string t;
    for (char c : s)
        if (!isspace((unsigned char)c)) t += c;
    try {
        QQ q(t);
        q.canonicalize();
        return q;
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace abctk
