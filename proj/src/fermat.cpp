#include "abctk/fermat.hpp"
#include "abctk/fp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace abctk {

// ---- reduced fractions of integer polynomials ----

FFFrac ff_frac(ZPoly num, ZPoly den) {
    if (den.is_zero()) throw std::domain_error("ff_frac: zero denominator");
    if (num.is_zero()) return FFFrac{ZPoly(), ZPoly(ZZ(1))};
    ZPoly g = poly_gcd(num, den);
    if (g.degree() > 0) {
        num = num.divexact(g);
        den = den.divexact(g);
    }
    ZZ c = zgcd(num.content(), den.content());
    if (c > 1) {
        ZPoly cc{c};
        num = num.divexact(cc);
        den = den.divexact(cc);
    }
    if (den.lc() < 0) {
        num = -num;
        den = -den;
    }
    return FFFrac{std::move(num), std::move(den)};
}

FFFrac frac_add(const FFFrac& a, const FFFrac& b) {
    return ff_frac(a.num * b.den + b.num * a.den, a.den * b.den);
}

FFFrac frac_sub(const FFFrac& a, const FFFrac& b) {
    return ff_frac(a.num * b.den - b.num * a.den, a.den * b.den);
}

FFFrac frac_mul(const FFFrac& a, const FFFrac& b) {
    return ff_frac(a.num * b.num, a.den * b.den);
}

FFFrac frac_div(const FFFrac& a, const FFFrac& b) {
    if (b.is_zero()) throw std::domain_error("frac_div: division by zero");
    return ff_frac(a.num * b.den, a.den * b.num);
}

bool frac_eq(const FFFrac& a, const FFFrac& b) { return a.num == b.num && a.den == b.den; }

static FFFrac frac_derivative(const FFFrac& a) {
    return ff_frac(a.num.derivative() * a.den - a.num * a.den.derivative(), a.den * a.den);
}

// ---- elements in the canonical presentation ----

bool FFElement::is_zero() const {
    for (const auto& c : comp)
        if (!c.is_zero()) return false;
    return true;
}

static void require_n(int n) {
    if (n < 2) throw std::invalid_argument("curve exponent must be >= 2");
}

FFElement ff_zero(int n) {
    require_n(n);
    FFElement f;
    f.n = n;
    f.comp.assign((size_t)n, FFFrac{ZPoly(), ZPoly(ZZ(1))});
    return f;
}

FFElement ff_const(int n, const QQ& c) {
    FFElement f = ff_zero(n);
    ZZ cn = c.get_num(), cd = c.get_den();
    f.comp[0] = ff_frac(ZPoly(cn), ZPoly(cd));
    return f;
}

FFElement ff_x(int n) {
    FFElement f = ff_zero(n);
    f.comp[0] = ff_frac(ZPoly::x(), ZPoly(ZZ(1)));
    return f;
}

FFElement ff_y(int n) {
    FFElement f = ff_zero(n);
    f.comp[1] = ff_frac(ZPoly(ZZ(1)), ZPoly(ZZ(1)));
    return f;
}

FFElement ff_from_frac(int n, const FFFrac& c, int ypow) {
    FFElement f = ff_zero(n);
    if (ypow < 0 || ypow >= n) throw std::invalid_argument("ff_from_frac: bad y power");
    f.comp[(size_t)ypow] = ff_frac(c.num, c.den);
    return f;
}

FFElement ff_normalize(int n, const std::vector<std::pair<ZPoly, ZPoly>>& raw) {
    FFElement f = ff_zero(n);
    if ((int)raw.size() > n) throw std::invalid_argument("ff_normalize: too many components");
    for (size_t i = 0; i < raw.size(); ++i) f.comp[i] = ff_frac(raw[i].first, raw[i].second);
    return f;
}

static void require_same(const FFElement& f, const FFElement& g) {
    if (f.n != g.n) throw std::invalid_argument("mismatched curve exponents");
}

FFElement ff_add(const FFElement& f, const FFElement& g) {
    require_same(f, g);
    FFElement r = ff_zero(f.n);
    for (size_t i = 0; i < (size_t)f.n; ++i) r.comp[i] = frac_add(f.comp[i], g.comp[i]);
    return r;
}

FFElement ff_neg(const FFElement& f) {
    FFElement r = ff_zero(f.n);
    for (size_t i = 0; i < (size_t)f.n; ++i) r.comp[i] = ff_frac(-f.comp[i].num, f.comp[i].den);
    return r;
}

FFElement ff_sub(const FFElement& f, const FFElement& g) { return ff_add(f, ff_neg(g)); }

// y^n on the curve
static ZPoly one_minus_xn(int n) {
    return ZPoly(ZZ(1)) - ZPoly::monomial(ZZ(1), (size_t)n);
}

// product with the reduction y^n = rel
static FFElement mul_rel(const FFElement& f, const FFElement& g, const FFFrac& rel) {
    int n = f.n;
    FFElement r = ff_zero(n);
    for (int i = 0; i < n; ++i) {
        if (f.comp[(size_t)i].is_zero()) continue;
        for (int j = 0; j < n; ++j) {
            if (g.comp[(size_t)j].is_zero()) continue;
            FFFrac t = frac_mul(f.comp[(size_t)i], g.comp[(size_t)j]);
            size_t k = (size_t)(i + j);
            if ((int)k >= n) {
                k -= (size_t)n;
                t = frac_mul(t, rel);
            }
            r.comp[k] = frac_add(r.comp[k], t);
        }
    }
    return r;
}

FFElement ff_mul(const FFElement& f, const FFElement& g) {
    require_same(f, g);
    return mul_rel(f, g, ff_frac(one_minus_xn(f.n), ZPoly(ZZ(1))));
}

// ---- inversion via the extended Euclid in (Q(x))[y] mod y^n - rel ----

using FracPoly = std::vector<FFFrac>;

static int fp_deg(const FracPoly& a) {
    for (size_t i = a.size(); i-- > 0;)
        if (!a[i].is_zero()) return (int)i;
    return -1;
}

static FracPoly fp_sub(const FracPoly& a, const FracPoly& b) {
    FracPoly r(std::max(a.size(), b.size()), FFFrac{ZPoly(), ZPoly(ZZ(1))});
    for (size_t i = 0; i < r.size(); ++i) {
        FFFrac av = i < a.size() ? a[i] : FFFrac{ZPoly(), ZPoly(ZZ(1))};
        FFFrac bv = i < b.size() ? b[i] : FFFrac{ZPoly(), ZPoly(ZZ(1))};
        r[i] = frac_sub(av, bv);
    }
    return r;
}

static FracPoly fp_mul(const FracPoly& a, const FracPoly& b) {
    int da = fp_deg(a), db = fp_deg(b);
    if (da < 0 || db < 0) return {};
    FracPoly r((size_t)(da + db) + 1, FFFrac{ZPoly(), ZPoly(ZZ(1))});
    for (int i = 0; i <= da; ++i) {
        if (a[(size_t)i].is_zero()) continue;
        for (int j = 0; j <= db; ++j)
            r[(size_t)(i + j)] = frac_add(r[(size_t)(i + j)], frac_mul(a[(size_t)i], b[(size_t)j]));
    }
    return r;
}

static std::pair<FracPoly, FracPoly> fp_divmod(const FracPoly& f, const FracPoly& d) {
    int dd = fp_deg(d);
    if (dd < 0) throw std::domain_error("fp_divmod: zero divisor");
    FracPoly r = f, q;
    int dr = fp_deg(r);
    if (dr >= dd) q.assign((size_t)(dr - dd) + 1, FFFrac{ZPoly(), ZPoly(ZZ(1))});
    while ((dr = fp_deg(r)) >= dd) {
        FFFrac c = frac_div(r[(size_t)dr], d[(size_t)dd]);
        q[(size_t)(dr - dd)] = c;
        for (int j = 0; j <= dd; ++j)
            r[(size_t)(dr - dd + j)] =
                frac_sub(r[(size_t)(dr - dd + j)], frac_mul(c, d[(size_t)j]));
    }
    return {q, r};
}

static FFElement inverse_rel(const FFElement& f, const FFFrac& rel) {
    if (f.is_zero()) throw std::domain_error("ff_inverse: zero element");
    int n = f.n;
    FracPoly M((size_t)n + 1, FFFrac{ZPoly(), ZPoly(ZZ(1))});
    M[0] = ff_frac(-rel.num, rel.den);
    M[(size_t)n] = ff_frac(ZPoly(ZZ(1)), ZPoly(ZZ(1)));
    FracPoly r0 = M, r1(f.comp.begin(), f.comp.end());
    FracPoly s0, s1{ff_frac(ZPoly(ZZ(1)), ZPoly(ZZ(1)))};
    while (fp_deg(r1) >= 0) {
        auto [q, r] = fp_divmod(r0, r1);
        FracPoly s = fp_sub(s0, fp_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (fp_deg(r0) != 0)
        throw std::logic_error("ff_inverse: the curve relation is reducible over Q(x)");
    FFElement out = ff_zero(n);
    for (size_t i = 0; i < s0.size() && (int)i < n; ++i)
        out.comp[i] = frac_div(s0[i], r0[0]);
    if (fp_deg(s0) >= n) throw std::logic_error("ff_inverse: cofactor degree out of range");
    return out;
}

FFElement ff_inverse(const FFElement& f) {
    return inverse_rel(f, ff_frac(one_minus_xn(f.n), ZPoly(ZZ(1))));
}

FFElement ff_pow(const FFElement& f, long e) {
    if (e < 0) return ff_inverse(ff_pow(f, -e));
    FFElement r = ff_const(f.n, QQ(1)), b = f;
    unsigned long u = (unsigned long)e;
    while (u) {
        if (u & 1) r = ff_mul(r, b);
        b = ff_mul(b, b);
        u >>= 1;
    }
    return r;
}

bool ff_eq(const FFElement& f, const FFElement& g) {
    if (f.n != g.n) return false;
    for (size_t i = 0; i < (size_t)f.n; ++i)
        if (!frac_eq(f.comp[i], g.comp[i])) return false;
    return true;
}

// ---- text form ----

std::string ff_to_string(const FFElement& f) {
    std::string out;
    for (int i = 0; i < f.n; ++i) {
        const FFFrac& c = f.comp[(size_t)i];
        if (c.is_zero()) continue;
        std::string term = "(" + poly_to_string(c.num) + ")/(" + poly_to_string(c.den) + ")";
        if (i == 1) term += "*y";
        if (i >= 2) term += "*y^" + std::to_string(i);
        if (!out.empty()) out += " + ";
        out += term;
    }
    if (out.empty()) out = "(0)/(1)";
    return out;
}

// matching close paren for the '(' at position i
static size_t match_paren(const std::string& s, size_t i) {
    int depth = 0;
    for (size_t j = i; j < s.size(); ++j) {
        if (s[j] == '(') ++depth;
        if (s[j] == ')' && --depth == 0) return j;
    }
    throw std::invalid_argument("ff parse: unbalanced parentheses");
}

FFElement parse_ff(int n, const std::string& s) {
    FFElement f = ff_zero(n);
    // split into terms at depth-0 " + "
    std::vector<std::string> terms;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0 && s.compare(i, 3, " + ") == 0) {
            terms.push_back(s.substr(start, i - start));
            start = i + 3;
            i += 2;
        }
    }
    terms.push_back(s.substr(start));
    for (auto& t : terms) {
        while (!t.empty() && t.front() == ' ') t.erase(t.begin());
        while (!t.empty() && t.back() == ' ') t.pop_back();
        if (t.empty() || t[0] != '(') throw std::invalid_argument("ff parse: bad term '" + t + "'");
        size_t ca = match_paren(t, 0);
        if (ca + 2 >= t.size() || t[ca + 1] != '/' || t[ca + 2] != '(')
            throw std::invalid_argument("ff parse: expected (a)/(q) in '" + t + "'");
        size_t cq = match_paren(t, ca + 2);
        std::string astr = t.substr(1, ca - 1);
        std::string qstr = t.substr(ca + 3, cq - ca - 3);
        std::string rest = t.substr(cq + 1);
        int ypow = 0;
        if (!rest.empty()) {
            if (rest == "*y")
                ypow = 1;
            else if (rest.compare(0, 3, "*y^") == 0)
                ypow = std::stoi(rest.substr(3));
            else
                throw std::invalid_argument("ff parse: bad suffix '" + rest + "'");
        }
        if (ypow < 0 || ypow >= n) throw std::invalid_argument("ff parse: y power out of range");
        auto ap = parse_poly(astr), qp = parse_poly(qstr);
        if (!ap || !qp) throw std::invalid_argument("ff parse: bad polynomial in '" + t + "'");
        f.comp[(size_t)ypow] = frac_add(f.comp[(size_t)ypow], ff_frac(*ap, *qp));
    }
    return f;
}

// ---- complexity ----

static double log_of(const ZZ& m) {
    if (m == 0) return 0;
    long e = 0;
    ZZ a = zabs(m);
    double d = mpz_get_d_2exp(&e, a.get_mpz_t());
    return std::log(d) + (double)e * std::log(2.0);
}

Complexity ff_complexity(const FFElement& f) {
    double H = (double)f.n;
    for (const auto& c : f.comp) {
        if (c.is_zero()) continue;
        H = std::max(H, (double)c.num.degree());
        H = std::max(H, (double)c.den.degree());
        ZZ m = 0;
        for (const ZZ& v : c.num.coeffs()) m = std::max(m, zabs(v));
        for (const ZZ& v : c.den.coeffs()) m = std::max(m, zabs(v));
        H = std::max(H, log_of(m));
    }
    return Complexity{H};
}

// ---- curve points ----

static QPoly nf_horner(const ZPoly& p, const QPoly& x, const NFCtx& K) {
    QPoly acc;
    for (int i = p.degree(); i >= 0; --i) {
        ZZ ci = p.coeff((size_t)i);
        acc = K.reduce(K.mul(acc, x) + QPoly(ZPoly(ci)));
    }
    return acc;
}

static bool on_curve_nf(int n, const NFCtx& K, const QPoly& xg, const QPoly& yg) {
    QPoly s = K.reduce(K.pow(xg, (unsigned long)n) + K.pow(yg, (unsigned long)n));
    return s == QPoly(QQ(1));
}

CurvePoint curve_point(int n, const AlgebraicNumber& x, const AlgebraicNumber& y) {
    require_n(n);
    auto pe = primitive_element(x, y);
    NFCtx K{QPoly(pe.gamma.minpoly)};
    if (!on_curve_nf(n, K, pe.expr_a, pe.expr_b))
        throw std::domain_error("curve_point: coordinates do not satisfy x^n + y^n = 1");
    CurvePoint Q;
    Q.n = n;
    Q.x0 = x;
    Q.y0 = y;
    Q.gamma = pe.gamma;
    Q.xg = K.reduce(pe.expr_a);
    Q.yg = K.reduce(pe.expr_b);
    return Q;
}

static std::optional<CurvePoint> try_curve_point(int n, const AlgebraicNumber& x,
                                                 const AlgebraicNumber& y) {
    auto pe = primitive_element(x, y);
    NFCtx K{QPoly(pe.gamma.minpoly)};
    if (!on_curve_nf(n, K, pe.expr_a, pe.expr_b)) return std::nullopt;
    CurvePoint Q;
    Q.n = n;
    Q.x0 = x;
    Q.y0 = y;
    Q.gamma = pe.gamma;
    Q.xg = K.reduce(pe.expr_a);
    Q.yg = K.reduce(pe.expr_b);
    return Q;
}

CurvePoint curve_point_infinity(int n, const AlgebraicNumber& eta) {
    require_n(n);
    NFCtx K{QPoly(eta.minpoly)};
    QPoly t{ZPoly::x()};
    if (!(K.pow(t, (unsigned long)n) == K.reduce(QPoly(QQ(-1)))))
        throw std::domain_error("curve_point_infinity: eta^n != -1");
    CurvePoint Q;
    Q.n = n;
    Q.at_infinity = true;
    Q.eta = eta;
    Q.gamma = eta;
    Q.yg = K.reduce(t);
    return Q;
}

std::string curve_point_to_string(const CurvePoint& Q) {
    if (Q.at_infinity) return "[1:" + coordinate_to_string(Q.eta) + ":0]";
    return "(" + coordinate_to_string(Q.x0) + ", " + coordinate_to_string(Q.y0) + ")";
}

static QBox box_pow(QBox b, int e) {
    QBox r{QIv(QQ(1)), QIv(QQ(0))};
    for (int i = 0; i < e; ++i) r = r * b;
    return r;
}

std::vector<CurvePoint> fiber_points(int n, const ZPoly& u) {
    require_n(n);
    if (u.degree() < 1) return {};
    std::vector<CurvePoint> out;
    QQ eps(1, 1 << 20);
    ZPoly onexn = one_minus_xn(n);
    for (const auto& x0 : roots_of(u, eps)) {
        AlgebraicNumber z = alg_eval_qpoly(QPoly(onexn), x0);
        ZPoly myY = alg_is_zero(z) ? ZPoly::monomial(ZZ(1), (size_t)n)
                                   : z.minpoly.compose(ZPoly::monomial(ZZ(1), (size_t)n));
        AlgebraicNumber zr = alg_refine(z, eps);
        AlgebraicNumber xr = alg_refine(x0, eps);
        for (const auto& y0 : roots_of(myY, eps)) {
            // numeric prefilter: y0^n must meet the box of 1 - x0^n
            QBox yb = box_pow(y0.box, n);
            if (yb.disjoint(zr.box)) continue;
            if (auto Q = try_curve_point(n, xr, y0)) out.push_back(*Q);
        }
    }
    return out;
}

std::vector<CurvePoint> infinity_points(int n) {
    require_n(n);
    ZPoly f = ZPoly::monomial(ZZ(1), (size_t)n) + ZPoly(ZZ(1));
    std::vector<CurvePoint> out;
    for (const auto& eta : roots_of(f, QQ(1, 1 << 20)))
        out.push_back(curve_point_infinity(n, eta));
    return out;
}

// ---- exact local expansion at a curve point ----

namespace {

struct NeedMorePrecision {};

// truncated Laurent series over the number field Q(gamma): coefficient of
// t^(lo+k) is c[k]; all coefficients with exponent < lo are exactly zero and
// the series is known exactly below t^prec; invariant c.size() == prec - lo
struct LSer {
    long lo = 0;
    long prec = 0;
    std::vector<QPoly> c;
};

LSer ls_norm(LSer s) {
    while (!s.c.empty() && s.c.front().is_zero()) {
        s.c.erase(s.c.begin());
        ++s.lo;
    }
    return s;
}

LSer ls_const(const QPoly& v, long prec) {
    LSer s;
    s.lo = 0;
    s.prec = std::max(prec, 1L);
    s.c.assign((size_t)s.prec, QPoly());
    s.c[0] = v;
    return ls_norm(std::move(s));
}

LSer ls_zero_unknown(long prec) {
    LSer s;
    s.lo = prec;
    s.prec = prec;
    return s;
}

LSer ls_add(const LSer& a, const LSer& b) {
    long lo = std::min(a.lo, b.lo);
    long prec = std::min(a.prec, b.prec);
    if (prec < lo) lo = prec;
    LSer r;
    r.lo = lo;
    r.prec = prec;
    r.c.assign((size_t)(prec - lo), QPoly());
    for (long e = lo; e < prec; ++e) {
        QPoly v;
        if (e >= a.lo && e < a.prec) v = v + a.c[(size_t)(e - a.lo)];
        if (e >= b.lo && e < b.prec) v = v + b.c[(size_t)(e - b.lo)];
        r.c[(size_t)(e - lo)] = v;
    }
    return ls_norm(std::move(r));
}

LSer ls_scale(LSer a, const QPoly& v, const NFCtx& K) {
    for (auto& x : a.c) x = K.mul(x, v);
    return ls_norm(std::move(a));
}

LSer ls_mul(const LSer& a, const LSer& b, const NFCtx& K) {
    long lo = a.lo + b.lo;
    long prec = std::min(a.prec + b.lo, b.prec + a.lo);
    if (a.c.empty() || b.c.empty()) return ls_zero_unknown(prec);
    LSer r;
    r.lo = lo;
    r.prec = prec;
    r.c.assign((size_t)(prec - lo), QPoly());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size() && i + j < r.c.size(); ++j)
            r.c[i + j] = r.c[i + j] + K.mul(a.c[i], b.c[j]);
    }
    for (auto& x : r.c) x = K.reduce(x);
    return ls_norm(std::move(r));
}

LSer ls_inv(LSer a, const NFCtx& K) {
    a = ls_norm(std::move(a));
    if (a.c.empty()) throw NeedMorePrecision{};
    LSer r;
    r.lo = -a.lo;
    r.prec = r.lo + (long)a.c.size();
    r.c.assign(a.c.size(), QPoly());
    QPoly b0 = K.inv(a.c[0]);
    r.c[0] = b0;
    for (size_t k = 1; k < r.c.size(); ++k) {
        QPoly s;
        for (size_t i = 1; i <= k; ++i) s = s + K.mul(a.c[i], r.c[k - i]);
        r.c[k] = K.mul(-s, b0);
    }
    return r;
}

// adds a rational constant; valid because coefficients below lo are exactly 0
LSer ls_add_const(LSer a, const QQ& v, const NFCtx&) {
    if (a.prec <= 0) throw NeedMorePrecision{};
    while (a.lo > 0) {
        a.c.insert(a.c.begin(), QPoly());
        --a.lo;
    }
    if (a.c.empty()) {  // lo == prec <= 0 would contradict prec > 0 after the loop
        a.c.assign((size_t)(a.prec - a.lo), QPoly());
    }
    a.c[(size_t)(-a.lo)] = a.c[(size_t)(-a.lo)] + QPoly(v);
    return ls_norm(std::move(a));
}

LSer ls_pow(const LSer& a, int e, const NFCtx& K, long prec) {
    LSer r = ls_const(QPoly(QQ(1)), prec);
    for (int i = 0; i < e; ++i) r = ls_mul(r, a, K);
    return r;
}

// the branch w(t) of w^n = rhs with w(0) = w0 != 0, via the binomial series
LSer series_root_n(const LSer& rhs, const QPoly& w0, int n, const NFCtx& K) {
    QPoly inv_w0n = K.inv(K.pow(w0, (unsigned long)n));
    LSer u = ls_scale(rhs, inv_w0n, K);        // 1 + delta
    LSer delta = ls_add_const(u, QQ(-1), K);   // order >= 1
    long prec = u.prec;
    LSer acc = ls_const(QPoly(QQ(1)), prec);
    LSer term = ls_const(QPoly(QQ(1)), prec);
    QQ bin(1);
    for (long k = 1; k < prec; ++k) {
        bin = bin * (QQ(1, n) - QQ(k - 1)) / QQ(k);
        term = ls_mul(term, delta, K);
        if (term.c.empty() && term.lo >= prec) break;
        acc = ls_add(acc, ls_scale(term, QPoly(bin), K));
    }
    return ls_scale(acc, w0, K);
}

struct Loc {
    NFCtx K;
    LSer xs, ys;
};

Loc make_local(const CurvePoint& Q, long len) {
    Loc L{NFCtx{QPoly(Q.gamma.minpoly)}, {}, {}};
    int n = Q.n;
    auto tser = [&](long prec) {  // the series "t"
        LSer s;
        s.lo = 0;
        s.prec = prec;
        s.c.assign((size_t)prec, QPoly());
        if (prec >= 2) s.c[1] = QPoly(QQ(1));
        return ls_norm(std::move(s));
    };
    if (!Q.at_infinity) {
        QPoly yg = L.K.reduce(Q.yg);
        if (!yg.is_zero()) {
            // uniformizer t = x - x0
            LSer t = tser(len);
            L.xs = ls_add(ls_const(Q.xg, len), t);
            LSer rhs = ls_add_const(ls_scale(ls_pow(L.xs, n, L.K, len), QPoly(QQ(-1)), L.K),
                                    QQ(1), L.K);  // 1 - x(t)^n
            L.ys = series_root_n(rhs, yg, n, L.K);
        } else {
            // ramified over x: uniformizer t = y
            L.ys = tser(len);
            LSer rhs = ls_add_const(ls_scale(ls_pow(L.ys, n, L.K, len), QPoly(QQ(-1)), L.K),
                                    QQ(1), L.K);  // 1 - t^n
            L.xs = series_root_n(rhs, Q.xg, n, L.K);
        }
    } else {
        // chart u = 1/x, v = y/x with v^n = u^n - 1; uniformizer t = u
        LSer u = tser(len);
        LSer rhs = ls_add_const(ls_pow(u, n, L.K, len), QQ(-1), L.K);  // t^n - 1
        LSer v = series_root_n(rhs, Q.yg, n, L.K);
        L.xs = ls_inv(u, L.K);
        L.ys = ls_mul(v, L.xs, L.K);
    }
    return L;
}

LSer poly_series(const ZPoly& p, const LSer& xs, const NFCtx& K, long prec) {
    LSer acc = ls_zero_unknown(prec);
    bool started = false;
    for (int i = p.degree(); i >= 0; --i) {
        if (started) acc = ls_mul(acc, xs, K);
        ZZ ci = p.coeff((size_t)i);
        if (!started) {
            acc = ls_const(QPoly(ZPoly(ci)), prec);
            started = true;
        } else if (ci != 0) {
            acc = ls_add_const(std::move(acc), QQ(ci), K);
        }
    }
    return acc;
}

LSer expand_ff(const FFElement& f, Loc& L, long prec) {
    LSer acc = ls_zero_unknown(prec);
    LSer yp = ls_const(QPoly(QQ(1)), prec);
    bool acc_set = false;
    for (int i = 0; i < f.n; ++i) {
        if (i > 0) yp = ls_mul(yp, L.ys, L.K);
        const FFFrac& c = f.comp[(size_t)i];
        if (c.is_zero()) continue;
        LSer A = poly_series(c.num, L.xs, L.K, prec);
        LSer D = poly_series(c.den, L.xs, L.K, prec);
        LSer term = ls_mul(ls_mul(A, ls_inv(D, L.K), L.K), yp, L.K);
        acc = acc_set ? ls_add(acc, term) : term;
        acc_set = true;
    }
    return ls_norm(std::move(acc));
}

// order-of-vanishing bound for a nonzero element: the degree of its zero
// divisor is at most the pole degree, which the presentation bounds
long ord_bound(const FFElement& f) {
    long d = 0;
    for (const auto& c : f.comp)
        if (!c.is_zero()) d = std::max(d, (long)(std::max(c.num.degree(), 0) +
                                                 std::max(c.den.degree(), 0)));
    return (long)f.n * (d + f.n + 2) + 16;
}

LSer expand_with_retry(const FFElement& f, const CurvePoint& Q, long min_terms) {
    long bound = ord_bound(f);
    for (long len = std::max(min_terms, 8L); len <= 8 * (bound + 8); len *= 2) {
        try {
            Loc L = make_local(Q, len);
            LSer s = expand_ff(f, L, len);
            if (!s.c.empty()) return s;
            if (s.prec > bound)
                throw std::logic_error("local expansion: element vanishes beyond its order bound");
        } catch (NeedMorePrecision&) {
        }
    }
    throw std::logic_error("local expansion: precision loop failed");
}

}  // namespace

ProjPoint ff_evaluate(const FFElement& f, const CurvePoint& Q) {
    if (f.n != Q.n) throw std::invalid_argument("ff_evaluate: mismatched curve exponents");
    if (f.is_zero()) return ProjPoint::affine(alg_from_rational(QQ(0)));
    if (!Q.at_infinity) {
        // fast path: no denominator vanishes at x0
        NFCtx K{QPoly(Q.gamma.minpoly)};
        QPoly val, yp{ZPoly(ZZ(1))};
        bool ok = true;
        for (int i = 0; i < f.n && ok; ++i) {
            const FFFrac& c = f.comp[(size_t)i];
            if (!c.is_zero()) {
                QPoly qv = nf_horner(c.den, Q.xg, K);
                if (qv.is_zero()) {
                    ok = false;
                    break;
                }
                QPoly av = nf_horner(c.num, Q.xg, K);
                val = K.reduce(val + K.mul(K.mul(av, K.inv(qv)), yp));
            }
            yp = K.mul(yp, Q.yg);
        }
        if (ok) return ProjPoint::affine(alg_eval_qpoly(val, Q.gamma));
    }
    LSer s = expand_with_retry(f, Q, 8);
    if (s.lo < 0) return ProjPoint::infinity();
    if (s.lo > 0) return ProjPoint::affine(alg_from_rational(QQ(0)));
    return ProjPoint::affine(alg_eval_qpoly(s.c[0], Q.gamma));
}

long ff_order_at(const FFElement& f, const CurvePoint& Q) {
    if (f.n != Q.n) throw std::invalid_argument("ff_order_at: mismatched curve exponents");
    if (f.is_zero()) throw std::invalid_argument("ff_order_at: zero element");
    LSer s = expand_with_retry(f, Q, 8);
    return s.lo;
}

// ramification index of f at Q
static int ram_index(const FFElement& f, const CurvePoint& Q) {
    long need = 8;
    long bound = ord_bound(f);
    while (true) {
        LSer s = expand_with_retry(f, Q, need);
        if (s.lo < 0) return (int)(-s.lo);  // pole of order e
        if (s.lo > 0) return (int)s.lo;     // zero of order e
        LSer t = s;
        t.c[0] = QPoly();
        t = ls_norm(std::move(t));
        if (!t.c.empty()) return (int)t.lo;
        if (t.prec > bound)
            throw std::logic_error("ram_index: vanishing beyond the order bound");
        need = 2 * (t.prec + 8);
    }
}

// ---- degree and critical locus ----

// lcm in Z[x] (integer contents included), positive leading coefficient
static ZPoly poly_lcm(const ZPoly& a, const ZPoly& b) {
    ZZ cg = zgcd(a.content(), b.content());
    ZPoly g = poly_gcd(a, b) * cg;
    ZPoly l = (a * b).divexact(g);
    return l.lc() < 0 ? -l : l;
}

// clear denominators: f = (sum g[i] y^i) / h with h = lcm of the q_i
static std::pair<std::vector<ZPoly>, ZPoly> cleared_form(const FFElement& f) {
    ZPoly h{ZZ(1)};
    for (const auto& c : f.comp)
        if (!c.is_zero()) h = poly_lcm(h, c.den);
    std::vector<ZPoly> g((size_t)f.n);
    for (size_t i = 0; i < (size_t)f.n; ++i)
        if (!f.comp[i].is_zero()) g[i] = f.comp[i].num * h.divexact(f.comp[i].den);
    return {g, h};
}

static std::vector<ZPoly> curve_rel_ypoly(int n) {
    // y^n + x^n - 1 as a polynomial in y over Z[x]
    std::vector<ZPoly> M((size_t)n + 1);
    M[0] = ZPoly::monomial(ZZ(1), (size_t)n) - ZPoly(ZZ(1));
    M[(size_t)n] = ZPoly(ZZ(1));
    return M;
}

static bool ff_is_constant(const FFElement& f) {
    for (size_t i = 1; i < (size_t)f.n; ++i)
        if (!f.comp[i].is_zero()) return false;
    return f.comp[0].num.degree() <= 0 && f.comp[0].den.degree() <= 0;
}

long ff_map_degree(const FFElement& f) {
    if (ff_is_constant(f)) throw std::invalid_argument("ff_map_degree: constant element");
    auto [g, h] = cleared_form(f);
    std::vector<ZPoly> M = curve_rel_ypoly(f.n);
    long best = 0;
    // more probes than the y-degree of the presentation: a root common to all
    // eliminants then cannot come from genuine fibre points (each x carries at
    // most n branch values), so the running gcd isolates the probe-independent
    // spurious factor supported on the pole locus of the cleared form
    const QQ probes[] = {QQ(3, 2),   QQ(7, 5),  QQ(-11, 3), QQ(17, 7), QQ(23, 11),
                         QQ(-29, 13), QQ(31, 17), QQ(37, 19), QQ(-41, 23)};
    ZPoly common;
    bool first = true;
    for (const QQ& t0 : probes) {
        std::vector<ZPoly> G = g;
        ZZ p = t0.get_num(), q = t0.get_den();
        for (auto& gi : G) gi = gi * q;
        G[0] = G[0] - h * p;
        ZPoly R = biv_resultant_y(G, M);
        best = std::max(best, (long)R.degree());
        common = first ? R : poly_gcd(common, R);
        first = false;
    }
    return best - common.degree();
}

CriticalLocus ff_critical_locus(const FFElement& f) {
    if (ff_is_constant(f)) throw std::invalid_argument("ff_critical_locus: constant element");
    int n = f.n;
    CriticalLocus out;
    out.map_degree = ff_map_degree(f);

    // w = df/dx using dy/dx = -x^{n-1}/y^{n-1}, i.e. y^i |-> -i x^{n-1} y^i/(1-x^n)
    ZPoly onexn = one_minus_xn(n);
    FFFrac xfac = ff_frac(ZPoly::monomial(ZZ(1), (size_t)(n - 1)), onexn);
    FFElement w = ff_zero(n);
    for (int i = 0; i < n; ++i) {
        if (f.comp[(size_t)i].is_zero()) continue;
        FFFrac d = frac_derivative(f.comp[(size_t)i]);
        if (i > 0) {
            FFFrac t = frac_mul(frac_mul(ff_frac(ZPoly(ZZ(i)), ZPoly(ZZ(1))), xfac),
                                f.comp[(size_t)i]);
            d = frac_sub(d, t);
        }
        w.comp[(size_t)i] = d;
    }
    if (w.is_zero()) throw std::logic_error("ff_critical_locus: zero differential");

    // candidate x-fibers: zeros of the norm of w, the ramified fiber of x,
    // and the poles of f
    auto [gw, hw] = cleared_form(w);
    auto [gf, hf] = cleared_form(f);
    (void)hw;
    ZPoly Nw = biv_resultant_y(gw, curve_rel_ypoly(n));
    if (Nw.is_zero()) throw std::logic_error("ff_critical_locus: degenerate norm");
    ZPoly xn1 = ZPoly::monomial(ZZ(1), (size_t)n) - ZPoly(ZZ(1));
    ZPoly P = squarefree_part(Nw * xn1 * hf);

    out.eliminant = ZPoly(ZZ(1));
    for (const auto& [u, mult] : factor_over_int(P)) {
        (void)mult;
        if (u.degree() < 1) continue;
        std::vector<int> es;
        for (const auto& Q : fiber_points(n, u)) es.push_back(ram_index(f, Q));
        std::sort(es.rbegin(), es.rend());
        for (int e : es) out.ramification_degree += e - 1;
        bool critical = !es.empty() && es.front() >= 2;
        if (critical) {
            out.fibers.push_back(CriticalFiber{u, es});
            out.eliminant = out.eliminant * u;
        }
    }
    for (const auto& Q : infinity_points(n)) out.infinity_e.push_back(ram_index(f, Q));
    std::sort(out.infinity_e.rbegin(), out.infinity_e.rend());
    for (int e : out.infinity_e) out.ramification_degree += e - 1;
    return out;
}

bool local_parameter_identity_check(int n, const ZZ& a) {
    require_n(n);
    if (a < 2) throw std::invalid_argument("local_parameter_identity_check: a must be >= 2");
    FFElement x = ff_x(n), y = ff_y(n);
    FFElement ax = ff_mul(ff_const(n, QQ(a)), x);
    FFElement axy = ff_sub(ax, y);
    FFElement lhs = ff_inverse(axy);
    FFElement yi = ff_inverse(y);
    FFElement r = ff_mul(ax, yi);  // ax/y
    FFElement num = ff_const(n, QQ(1));
    for (int i = 1; i < n; ++i) num = ff_add(num, ff_pow(r, i));
    ZZ an = zpow(a, (unsigned long)n);
    ZZ an1 = an + 1;
    FFElement den = ff_sub(ff_mul(ff_const(n, QQ(an)), ff_pow(yi, n - 1)),
                           ff_mul(ff_const(n, QQ(an1)), y));
    FFElement rhs = ff_mul(num, ff_inverse(den));
    return ff_eq(lhs, rhs) && ff_eq(ff_mul(lhs, axy), ff_const(n, QQ(1)));
}

}  // namespace abctk
