#pragma once

#include "abctk/zz.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abctk {

// Dense integer polynomial, coefficients lowest-degree first.
// Zero polynomial <=> empty coefficient vector.
class ZPoly {
  public:
    ZPoly() = default;
    explicit ZPoly(const ZZ& c) { if (c != 0) c_ = {c}; }
    explicit ZPoly(std::vector<ZZ> coeffs) : c_(std::move(coeffs)) { trim(); }

    static ZPoly x() { return ZPoly(std::vector<ZZ>{0, 1}); }
    static ZPoly monomial(const ZZ& a, size_t deg);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return (int)c_.size() - 1; }  // -1 for zero
    const ZZ& lc() const { return c_.back(); }
    ZZ coeff(size_t i) const { return i < c_.size() ? c_[i] : ZZ(0); }
    const std::vector<ZZ>& coeffs() const { return c_; }

    ZZ content() const;             // >= 0; content(0) = 0
    ZPoly primitive_part() const;   // content 1, positive lc; pp(0) = 0
    ZPoly derivative() const;

    ZPoly operator-() const;
    ZPoly operator+(const ZPoly& o) const;
    ZPoly operator-(const ZPoly& o) const;
    ZPoly operator*(const ZPoly& o) const;
    ZPoly operator*(const ZZ& s) const;
    bool operator==(const ZPoly& o) const { return c_ == o.c_; }

    ZZ eval(const ZZ& t) const;
    QQ eval(const QQ& t) const;
    // numerator of lc-cleared evaluation: den^deg * f(num/den)
    ZZ eval_homog(const ZZ& num, const ZZ& den) const;

    ZPoly pow(unsigned long e) const;
    ZPoly compose(const ZPoly& g) const;   // f(g(x))
    ZPoly shift(const QQ& c) const;        // primitive part of cleared f(x + c)
    ZPoly reverse() const;                 // x^deg * f(1/x)

    // exact division; caller guarantees divisibility
    ZPoly divexact(const ZPoly& d) const;
    bool divides(const ZPoly& d) const;    // d | *this ?

    std::string str(const std::string& var = "x") const;

  private:
    void trim() { while (!c_.empty() && c_.back() == 0) c_.pop_back(); }
    std::vector<ZZ> c_;
};

// pseudo-remainder: lc(d)^(deg f - deg d + 1) * f = q*d + r
ZPoly pseudo_rem(const ZPoly& f, const ZPoly& d);

// primitive gcd over Q, positive lc; gcd(0,0) = 0
ZPoly poly_gcd(const ZPoly& f, const ZPoly& g);

// Sylvester resultant, exact (subresultant PRS)
ZZ resultant(const ZPoly& f, const ZPoly& g);

// (-1)^(d(d-1)/2) Res(f, f') / lc(f)
ZZ discriminant(const ZPoly& f);

ZPoly squarefree_part(const ZPoly& f);

// text format: "x^4 - 10*x^2 + 1"
std::string poly_to_string(const ZPoly& f, const std::string& var = "x");
std::optional<ZPoly> parse_poly(const std::string& s, const std::string& var = "x");

// rational polynomial as primitive integer polynomial / positive denominator
struct QPoly {
    ZPoly num;
    ZZ den{1};

    QPoly() = default;
    QPoly(ZPoly n, ZZ d);
    explicit QPoly(const ZPoly& n) : num(n) {}
    explicit QPoly(const QQ& c) : num(ZPoly(ZZ(c.get_num()))), den(c.get_den()) {}

    bool is_zero() const { return num.is_zero(); }
    int degree() const { return num.degree(); }
    QQ coeff(size_t i) const { return QQ(num.coeff(i)) / den; }
    QQ lc() const { return QQ(num.lc()) / den; }

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator*(const QPoly& o) const;
    QPoly operator*(const QQ& s) const;
    QPoly operator-() const;
    bool operator==(const QPoly& o) const { return num == o.num && den == o.den; }

    QQ eval(const QQ& t) const { return num.eval(t) / QQ(den); }
    QPoly derivative() const { return QPoly(num.derivative(), den); }
};

// division with remainder over Q: f = q*d + r, deg r < deg d
std::pair<QPoly, QPoly> qpoly_divmod(const QPoly& f, const QPoly& d);

// resultant in y of two bivariate polynomials over Z[x], given as vectors of
// ZPoly coefficients lowest y-degree first; exact (fraction-free Bareiss)
ZPoly biv_resultant_y(const std::vector<ZPoly>& A, const std::vector<ZPoly>& B);

}  // namespace abctk
