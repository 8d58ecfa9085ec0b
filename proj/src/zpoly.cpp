#include "abctk/zpoly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace abctk {

ZPoly ZPoly::monomial(const ZZ& a, size_t deg) {
    if (a == 0) return ZPoly();
    std::vector<ZZ> c(deg + 1, ZZ(0));
    c[deg] = a;
    return ZPoly(std::move(c));
}

ZZ ZPoly::content() const {
    ZZ g = 0;
    for (auto& a : c_) g = zgcd(g, a);
    return g;
}

ZPoly ZPoly::primitive_part() const {
    if (is_zero()) return ZPoly();
    ZZ g = content();
    if (lc() < 0) g = -g;
    std::vector<ZZ> out;
    out.reserve(c_.size());
    for (auto& a : c_) out.push_back(zdivexact(a, g));
    return ZPoly(std::move(out));
}

ZPoly ZPoly::derivative() const {
    if (c_.size() <= 1) return ZPoly();
    std::vector<ZZ> out(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * (long)i;
    return ZPoly(std::move(out));
}

ZPoly ZPoly::operator-() const {
    std::vector<ZZ> out(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) out[i] = -c_[i];
    return ZPoly(std::move(out));
}

ZPoly ZPoly::operator+(const ZPoly& o) const {
    std::vector<ZZ> out(std::max(c_.size(), o.c_.size()), ZZ(0));
    for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
    return ZPoly(std::move(out));
}

ZPoly ZPoly::operator-(const ZPoly& o) const { return *this + (-o); }

ZPoly ZPoly::operator*(const ZPoly& o) const {
    if (is_zero() || o.is_zero()) return ZPoly();
    std::vector<ZZ> out(c_.size() + o.c_.size() - 1, ZZ(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
    }
    return ZPoly(std::move(out));
}

ZPoly ZPoly::operator*(const ZZ& s) const {
    if (s == 0) return ZPoly();
    std::vector<ZZ> out(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) out[i] = c_[i] * s;
    return ZPoly(std::move(out));
}

ZZ ZPoly::eval(const ZZ& t) const {
    ZZ acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
    return acc;
}

QQ ZPoly::eval(const QQ& t) const {
    QQ acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * t + QQ(c_[i]);
    return acc;
}

ZZ ZPoly::eval_homog(const ZZ& num, const ZZ& den) const {
    if (is_zero()) return 0;
    ZZ acc = 0, dp = 1;
    for (size_t i = c_.size(); i-- > 0;) {
        acc = acc * num + c_[i] * dp;
        if (i > 0) dp *= den;
    }
    return acc;
}

ZPoly ZPoly::pow(unsigned long e) const {
    ZPoly r(ZZ(1)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

ZPoly ZPoly::compose(const ZPoly& g) const {
    ZPoly acc;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * g + ZPoly(c_[i]);
    return acc;
}

ZPoly ZPoly::shift(const QQ& c) const {
    if (is_zero()) return ZPoly();
    // f(x + p/q), cleared by q^deg, then primitive part
    ZZ p = c.get_num(), q = c.get_den();
    int d = degree();
    // Horner in (q*x + p)
    ZPoly lin(std::vector<ZZ>{p, q});
    ZPoly acc;
    ZZ qp = 1;
    for (int i = d; i >= 0; --i) {
        acc = acc * lin + ZPoly(c_[i] * qp);
        if (i > 0) qp *= q;
    }
    return acc.primitive_part();
}

ZPoly ZPoly::reverse() const {
    std::vector<ZZ> out(c_.rbegin(), c_.rend());
    return ZPoly(std::move(out));
}

ZPoly ZPoly::divexact(const ZPoly& d) const {
    if (is_zero()) return ZPoly();
    std::vector<ZZ> rem = c_, out(c_.size() - d.c_.size() + 1, ZZ(0));
    for (size_t i = out.size(); i-- > 0;) {
        ZZ q = zdivexact(rem[i + d.c_.size() - 1], d.lc());
        out[i] = q;
        if (q != 0)
            for (size_t j = 0; j < d.c_.size(); ++j) rem[i + j] -= q * d.c_[j];
    }
    return ZPoly(std::move(out));
}

bool ZPoly::divides(const ZPoly& d) const {
    // does d divide *this (over Q, both primitive => over Z up to constants)?
    if (d.is_zero()) return is_zero();
    if (is_zero()) return true;
    if (degree() < d.degree()) return false;
    ZPoly r = pseudo_rem(*this, d);
    return r.is_zero();
}

ZPoly pseudo_rem(const ZPoly& f, const ZPoly& d) {
    if (d.is_zero()) throw std::invalid_argument("pseudo_rem: zero divisor");
    if (f.degree() < d.degree()) return f;
    std::vector<ZZ> r(f.coeffs());
    int dd = d.degree();
    const ZZ& l = d.lc();
    for (int i = f.degree(); i >= dd; --i) {
        ZZ top = r[i];
        for (int j = 0; j <= i; ++j) r[j] *= l;
        if (top != 0)
            for (int j = 0; j <= dd; ++j) r[i - dd + j] -= top * d.coeff(j);
        r[i] = 0;
    }
    r.resize(dd);
    return ZPoly(std::move(r));
}

ZPoly poly_gcd(const ZPoly& f, const ZPoly& g) {
    ZPoly a = f.primitive_part(), b = g.primitive_part();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.degree() < b.degree()) std::swap(a, b);
    // subresultant PRS
    ZZ h = 1, s = 1;
    while (true) {
        int delta = a.degree() - b.degree();
        ZPoly r = pseudo_rem(a, b);
        if (r.is_zero()) return b.primitive_part();
        if (r.degree() == 0) return ZPoly(ZZ(1));
        a = b;
        ZZ denom = s * zpow(h, (unsigned long)delta);
        std::vector<ZZ> rc(r.coeffs());
        for (auto& c : rc) c = zdivexact(c, denom);
        b = ZPoly(std::move(rc));
        s = a.lc();
        if (delta >= 1)
            h = zdivexact(zpow(s, (unsigned long)delta), zpow(h, (unsigned long)(delta - 1)));
    }
}

ZZ resultant(const ZPoly& f, const ZPoly& g) {
    if (f.is_zero() || g.is_zero()) throw std::invalid_argument("resultant: zero input");
    if (f.degree() == 0) return zpow(f.lc(), (unsigned long)g.degree());
    if (g.degree() == 0) return zpow(g.lc(), (unsigned long)f.degree());
    // Sylvester determinant via fraction-free (Bareiss) elimination
    int m = f.degree(), n = g.degree(), N = m + n;
    std::vector<std::vector<ZZ>> a((size_t)N, std::vector<ZZ>((size_t)N, ZZ(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) a[(size_t)i][(size_t)(i + j)] = f.coeff((size_t)(m - j));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) a[(size_t)(n + i)][(size_t)(i + j)] = g.coeff((size_t)(n - j));
    ZZ prev = 1;
    bool neg = false;
    for (int k = 0; k < N - 1; ++k) {
        if (a[(size_t)k][(size_t)k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < N; ++i)
                if (a[(size_t)i][(size_t)k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(a[(size_t)k], a[(size_t)piv]);
            neg = !neg;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j)
                a[(size_t)i][(size_t)j] = zdivexact(
                    a[(size_t)k][(size_t)k] * a[(size_t)i][(size_t)j] -
                        a[(size_t)i][(size_t)k] * a[(size_t)k][(size_t)j],
                    prev);
            a[(size_t)i][(size_t)k] = 0;
        }
        prev = a[(size_t)k][(size_t)k];
    }
    ZZ det = a[(size_t)(N - 1)][(size_t)(N - 1)];
    return neg ? ZZ(-det) : det;
}

ZZ discriminant(const ZPoly& f) {
    if (f.degree() < 1) throw std::invalid_argument("discriminant: constant polynomial");
    if (f.degree() == 1) return 1;
    ZZ r = resultant(f, f.derivative());
    r = zdivexact(r, f.lc());
    long d = f.degree();
    if (((d * (d - 1)) / 2) % 2) r = -r;
    return r;
}

ZPoly squarefree_part(const ZPoly& f) {
    if (f.degree() <= 0) return f.primitive_part();
    ZPoly g = poly_gcd(f, f.derivative());
    if (g.degree() == 0) return f.primitive_part();
    // both primitive, so the quotient is integral (Gauss)
    return f.primitive_part().divexact(g).primitive_part();
}

std::string ZPoly::str(const std::string& var) const { return poly_to_string(*this, var); }

std::string poly_to_string(const ZPoly& f, const std::string& var) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = f.degree(); i >= 0; --i) {
        ZZ c = f.coeff((size_t)i);
        if (c == 0) continue;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        ZZ a = zabs(c);
        if (i == 0) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

namespace {

struct PolyParser {
    const std::string& s;
    const std::string& var;
    size_t i = 0;

    void skip() { while (i < s.size() && isspace((unsigned char)s[i])) ++i; }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }

    std::optional<ZPoly> parse() {
        auto r = expr();
        skip();
        if (!r || i != s.size()) return std::nullopt;
        return r;
    }

    std::optional<ZPoly> expr() {
        skip();
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        auto t = term();
        if (!t) return std::nullopt;
        ZPoly acc = neg ? -*t : *t;
        while (true) {
            skip();
            if (i >= s.size() || (s[i] != '+' && s[i] != '-')) break;
            bool minus = s[i] == '-';
            ++i;
            auto u = term();
            if (!u) return std::nullopt;
            acc = minus ? acc - *u : acc + *u;
        }
        return acc;
    }

    std::optional<ZPoly> term() {
        auto f = factor();
        if (!f) return std::nullopt;
        ZPoly acc = *f;
        while (true) {
            skip();
            if (i < s.size() && s[i] == '*') {
                ++i;
                auto g = factor();
                if (!g) return std::nullopt;
                acc = acc * *g;
            } else if (i < s.size() && (s[i] == var[0] || isdigit((unsigned char)s[i]) || s[i] == '(')) {
                auto g = factor();  // implicit multiplication "2x"
                if (!g) return std::nullopt;
                acc = acc * *g;
            } else {
                break;
            }
        }
        return acc;
    }

    std::optional<ZPoly> factor() {
        skip();
        ZPoly base;
        if (i < s.size() && s[i] == '(') {
            ++i;
            auto e = expr();
            if (!e || !eat(')')) return std::nullopt;
            base = *e;
        } else if (s.compare(i, var.size(), var) == 0) {
            i += var.size();
            base = ZPoly::x();
        } else if (i < s.size() && isdigit((unsigned char)s[i])) {
            size_t j = i;
            while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
            base = ZPoly(ZZ(s.substr(i, j - i)));
            i = j;
        } else {
            return std::nullopt;
        }
        skip();
        if (eat('^')) {
            skip();
            size_t j = i;
            while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
            if (j == i) return std::nullopt;
            unsigned long e = std::stoul(s.substr(i, j - i));
            i = j;
            base = base.pow(e);
        }
        return base;
    }
};

}  // namespace

std::optional<ZPoly> parse_poly(const std::string& s, const std::string& var) {
    PolyParser p{s, var};
    return p.parse();
}

QPoly::QPoly(ZPoly n, ZZ d) {
    if (d == 0) throw std::invalid_argument("QPoly: zero denominator");
    if (n.is_zero()) { num = ZPoly(); den = 1; return; }
    if (d < 0) { d = -d; n = -n; }
    ZZ g = zgcd(n.content(), d);
    if (g != 1) {
        std::vector<ZZ> c(n.coeffs());
        for (auto& a : c) a = zdivexact(a, g);
        n = ZPoly(std::move(c));
        d = zdivexact(d, g);
    }
    num = std::move(n);
    den = std::move(d);
}

QPoly QPoly::operator+(const QPoly& o) const {
    return QPoly(num * o.den + o.num * den, den * o.den);
}
QPoly QPoly::operator-(const QPoly& o) const {
    return QPoly(num * o.den - o.num * den, den * o.den);
}
QPoly QPoly::operator*(const QPoly& o) const { return QPoly(num * o.num, den * o.den); }
QPoly QPoly::operator*(const QQ& s) const {
    return QPoly(num * ZZ(s.get_num()), den * s.get_den());
}
QPoly QPoly::operator-() const { return QPoly(-num, den); }

std::pair<QPoly, QPoly> qpoly_divmod(const QPoly& f, const QPoly& d) {
    if (d.is_zero()) throw std::invalid_argument("qpoly_divmod: zero divisor");
    std::vector<QQ> r(f.num.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = QQ(f.num.coeff(i)) / f.den;
    int dd = d.degree();
    QQ dl = d.lc();
    std::vector<QQ> q(std::max(0, f.degree() - dd + 1), QQ(0));
    for (int i = f.degree(); i >= dd; --i) {
        QQ c = r[(size_t)i] / dl;
        if (c == 0) continue;
        q[(size_t)(i - dd)] = c;
        for (int j = 0; j <= dd; ++j) r[(size_t)(i - dd + j)] -= c * d.coeff((size_t)j);
    }
    auto to_qpoly = [](const std::vector<QQ>& v) {
        ZZ l = 1;
        for (auto& a : v) l = zlcm(l, a.get_den());
        std::vector<ZZ> n(v.size());
        for (size_t i = 0; i < v.size(); ++i) n[i] = ZZ(v[i] * QQ(l));
        return QPoly(ZPoly(std::move(n)), l);
    };
    std::vector<QQ> rr(r.begin(), r.begin() + std::min<size_t>(r.size(), (size_t)dd));
    return {to_qpoly(q), to_qpoly(rr)};
}

}  // namespace abctk
