#include "abctk/interval.hpp"

#include <mpfr.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace abctk {

QIv QIv::operator*(const QIv& o) const {
    QQ a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
}

QIv QIv::abs() const {
    if (lo >= 0) return *this;
    if (hi <= 0) return -*this;
    return {QQ(0), std::max(QQ(-lo), hi)};
}

QIv QIv::sqr() const {
    QIv a = abs();
    return {a.lo * a.lo, a.hi * a.hi};
}

QIv QIv::inv() const {
    if (contains_zero()) throw std::domain_error("QIv::inv: interval contains zero");
    return {QQ(1) / hi, QQ(1) / lo};
}

QIv QIv::hull(const QIv& a, const QIv& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

QIv QIv::intersect(const QIv& a, const QIv& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

QIv iv_max(const QIv& a, const QIv& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }
QIv iv_min(const QIv& a, const QIv& b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }

namespace {

QQ mpfr_to_q(mpfr_t x) {
    if (mpfr_zero_p(x)) return QQ(0);
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, x);
    QQ out(q);
    mpq_clear(q);
    out.canonicalize();
    return out;
}

// enclosure of f(x) using MPFR directed rounding
template <typename F>
QIv mpfr_enclose(const QQ& x, unsigned prec, F&& f) {
    mpfr_t in, lo, hi;
    mpfr_init2(in, prec + 32);
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_set_q(in, x.get_mpq_t(), MPFR_RNDD);
    f(lo, in, MPFR_RNDD);
    mpfr_set_q(in, x.get_mpq_t(), MPFR_RNDU);
    f(hi, in, MPFR_RNDU);
    QIv out(mpfr_to_q(lo), mpfr_to_q(hi));
    mpfr_clears(in, lo, hi, (mpfr_ptr) nullptr);
    if (!out.valid()) throw std::logic_error("mpfr enclosure invalid");
    return out;
}

}  // namespace

QIv log_enclosure(const QQ& x, unsigned prec) {
    if (x <= 0) throw std::domain_error("log_enclosure: nonpositive argument");
    if (x == 1) return QIv(QQ(0));
    return mpfr_enclose(x, prec, [](mpfr_t r, mpfr_t a, mpfr_rnd_t rnd) { mpfr_log(r, a, rnd); });
}

QIv log_enclosure(const QIv& x, unsigned prec) {
    if (x.lo <= 0) throw std::domain_error("log_enclosure: interval not positive");
    return {log_enclosure(x.lo, prec).lo, log_enclosure(x.hi, prec).hi};
}

QIv sqrt_enclosure(const QIv& x, unsigned prec) {
    if (x.lo < 0) throw std::domain_error("sqrt_enclosure: negative argument");
    auto s = [](const QQ& v, unsigned p, mpfr_rnd_t rnd) {
        mpfr_t in, out;
        mpfr_init2(in, p + 32);
        mpfr_init2(out, p);
        mpfr_set_q(in, v.get_mpq_t(), rnd);
        mpfr_sqrt(out, in, rnd);
        QQ r = mpfr_to_q(out);
        mpfr_clears(in, out, (mpfr_ptr) nullptr);
        return r;
    };
    QQ lo = s(x.lo, prec, MPFR_RNDD), hi = s(x.hi, prec, MPFR_RNDU);
    if (lo < 0) lo = 0;
    return {lo, hi};
}

QIv exp_enclosure(const QQ& x, unsigned prec) {
    return mpfr_enclose(x, prec, [](mpfr_t r, mpfr_t a, mpfr_rnd_t rnd) { mpfr_exp(r, a, rnd); });
}

std::string qq_decimal(const QQ& v, int digits, bool round_up) {
    ZZ scale = zpow(ZZ(10), (unsigned long)digits);
    ZZ num = v.get_num() * scale, den = v.get_den();
    ZZ q;
    if (round_up)
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    else
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    bool neg = q < 0;
    ZZ a = zabs(q);
    std::string s = a.get_str();
    if ((int)s.size() <= digits) s = std::string((size_t)(digits + 1 - (int)s.size()), '0') + s;
    s.insert(s.size() - (size_t)digits, ".");
    return (neg ? "-" : "") + s;
}

std::string iv_to_string(const QIv& v, int digits) {
    std::ostringstream os;
    os << "[" << qq_decimal(v.lo, digits, false) << "," << qq_decimal(v.hi, digits, true) << "]";
    return os.str();
}

}  // namespace abctk
