#pragma once

#include "abctk/zz.hpp"

#include <string>

namespace abctk {

// Closed interval with exact rational endpoints. All arithmetic is exact
// (outward rounding only enters through log/exp enclosures, which use MPFR
// directed rounding and return rational endpoint bounds).
struct QIv {
    QQ lo, hi;

    QIv() : lo(0), hi(0) {}
    QIv(const QQ& v) : lo(v), hi(v) {}
    QIv(QQ l, QQ h) : lo(std::move(l)), hi(std::move(h)) {}

    bool valid() const { return lo <= hi; }
    QQ width() const { return hi - lo; }
    QQ mid() const { return (lo + hi) / 2; }
    bool contains(const QQ& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    bool strictly_inside(const QIv& o) const { return o.lo < lo && hi < o.hi; }

    QIv operator-() const { return {-hi, -lo}; }
    QIv operator+(const QIv& o) const { return {lo + o.lo, hi + o.hi}; }
    QIv operator-(const QIv& o) const { return {lo - o.hi, hi - o.lo}; }
    QIv operator*(const QIv& o) const;
    QIv operator*(const QQ& s) const { return s >= 0 ? QIv{lo * s, hi * s} : QIv{hi * s, lo * s}; }
    QIv operator+(const QQ& s) const { return {lo + s, hi + s}; }

    QIv abs() const;
    QIv sqr() const;
    // reciprocal; requires !contains_zero()
    QIv inv() const;

    static QIv hull(const QIv& a, const QIv& b);
    static QIv intersect(const QIv& a, const QIv& b);  // may be invalid
};

QIv iv_max(const QIv& a, const QIv& b);
QIv iv_min(const QIv& a, const QIv& b);

// rational enclosure of log x at ~`prec` bits, x > 0
QIv log_enclosure(const QQ& x, unsigned prec);
QIv log_enclosure(const QIv& x, unsigned prec);  // requires x.lo > 0
// rational enclosure of sqrt x, x ≥ 0
QIv sqrt_enclosure(const QIv& x, unsigned prec);
// rational enclosure of exp x
QIv exp_enclosure(const QQ& x, unsigned prec);

// decimal string rounded outward to `digits` places
std::string iv_to_string(const QIv& v, int digits = 12);
std::string qq_decimal(const QQ& v, int digits, bool round_up);

// Complex box: rectangle with rational endpoints.
struct QBox {
    QIv re, im;

    QBox() = default;
    QBox(QIv r, QIv i) : re(std::move(r)), im(std::move(i)) {}
    explicit QBox(const QQ& v) : re(v), im(QQ(0)) {}

    bool valid() const { return re.valid() && im.valid(); }
    QQ width() const { return std::max(re.width(), im.width()); }
    QBox mid() const { return QBox(QIv(re.mid()), QIv(im.mid())); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool strictly_inside(const QBox& o) const {
        return re.strictly_inside(o.re) && im.strictly_inside(o.im);
    }
    bool disjoint(const QBox& o) const {
        return !QIv::intersect(re, o.re).valid() || !QIv::intersect(im, o.im).valid();
    }

    QBox operator-() const { return {-re, -im}; }
    QBox operator+(const QBox& o) const { return {re + o.re, im + o.im}; }
    QBox operator-(const QBox& o) const { return {re - o.re, im - o.im}; }
    QBox operator*(const QBox& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    QBox operator*(const QQ& s) const { return {re * s, im * s}; }
    // |z|² as exact interval
    QIv norm2() const { return re.sqr() + im.sqr(); }
    // reciprocal; requires !norm2().contains_zero()
    QBox inv() const {
        QIv n = norm2().inv();
        return {re * n, (-im) * n};
    }
    QBox operator/(const QBox& o) const { return *this * o.inv(); }
};

}  // namespace abctk
