#include "abctk/alg.hpp"
#include "abctk/fp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abctk {

namespace {

struct CF {  // complex float for the approximation stage (certification is exact)
    mpf_class re, im;

    CF operator+(const CF& o) const { return {re + o.re, im + o.im}; }
    CF operator-(const CF& o) const { return {re - o.re, im - o.im}; }
    CF operator*(const CF& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    CF operator/(const CF& o) const {
        mpf_class n = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    mpf_class norm() const { return re * re + im * im; }
};

QQ mpf_to_q(const mpf_class& x) {
    mpq_t q;
    mpq_init(q);
    mpq_set_f(q, x.get_mpf_t());
    QQ out(q);
    mpq_clear(q);
    out.canonicalize();
    return out;
}

// Durand–Kerner simultaneous iteration at `prec` bits
std::vector<CF> approximate_roots(const ZPoly& f, unsigned prec) {
    int d = f.degree();
    std::vector<CF> c(d + 1);
    for (int i = 0; i <= d; ++i) {
        c[i].re = mpf_class(f.coeff((size_t)i), prec);
        c[i].im = mpf_class(0, prec);
    }
    auto eval = [&](const CF& z) {
        CF acc{mpf_class(0, prec), mpf_class(0, prec)};
        for (int i = d; i >= 0; --i) acc = acc * z + c[(size_t)i];
        return acc;
    };
    // Cauchy bound for the initial circle
    mpf_class R(1, prec);
    for (int i = 0; i < d; ++i) {
        mpf_class t = abs(c[(size_t)i].re) / abs(c[(size_t)d].re == 0 ? mpf_class(1) : c[(size_t)d].re);
        mpf_class u = 1 + t;
        if (u > R) R = u;
    }
    std::vector<CF> w((size_t)d);
    for (int i = 0; i < d; ++i) {
        double ang = 2.0 * 3.14159265358979323846 * i / d + 0.41;
        w[(size_t)i] = {R * mpf_class(std::cos(ang), prec), R * mpf_class(std::sin(ang), prec)};
    }
    mpf_class tol(1, prec);
    tol >>= (prec * 3) / 4;
    for (int iter = 0; iter < 1000; ++iter) {
        mpf_class worst(0, prec);
        for (int i = 0; i < d; ++i) {
            CF denom = c[(size_t)d];
            for (int j = 0; j < d; ++j)
                if (j != i) denom = denom * (w[(size_t)i] - w[(size_t)j]);
            if (denom.norm() == 0) {
                w[(size_t)i].re += mpf_class(1, prec) >> (prec / 2);
                continue;
            }
            CF delta = eval(w[(size_t)i]) / denom;
            w[(size_t)i] = w[(size_t)i] - delta;
            if (delta.norm() > worst) worst = delta.norm();
        }
        if (worst < tol * tol) break;
    }
    return w;
}

// round to the dyadic grid 2^-g; keeps rational endpoints from blowing up
QQ dyadic(const QQ& x, unsigned long g, bool up) {
    ZZ num = x.get_num();
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), g);
    ZZ q;
    if (up)
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
    else
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
    ZZ den(1);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), g);
    QQ r(q, den);
    r.canonicalize();
    return r;
}

QIv round_out(const QIv& v, unsigned long g) {
    return {dyadic(v.lo, g, false), dyadic(v.hi, g, true)};
}

QBox round_out(const QBox& X, unsigned long g) {
    return {round_out(X.re, g), round_out(X.im, g)};
}

// smallest g with 2^-g ≤ x
unsigned long grid_bits(const QQ& x) {
    QQ inv = QQ(1) / x;
    ZZ c;
    mpz_cdiv_q(c.get_mpz_t(), inv.get_num().get_mpz_t(), inv.get_den().get_mpz_t());
    if (c <= 1) return 1;
    return mpz_sizeinbase(c.get_mpz_t(), 2);
}

QBox box_eval(const ZPoly& f, const QBox& X) {
    QBox acc(QQ(0));
    for (int i = f.degree(); i >= 0; --i) acc = acc * X + QBox(QQ(f.coeff((size_t)i)));
    return acc;
}

QBox point_eval(const ZPoly& f, const QBox& m) { return box_eval(f, m); }

// Krawczyk operator: K(X) = m − f(m)/c + (1 − f'(X)/c)(X − m), c = f'(m).
// K(X) strictly inside X certifies existence and uniqueness of a root in X.
bool krawczyk_certify(const ZPoly& f, const ZPoly& fd, const QBox& X, QBox* out = nullptr) {
    QBox m = X.mid();
    QBox c = point_eval(fd, m);
    if (c.norm2().contains_zero()) return false;
    QBox one(QQ(1));
    QBox K = m - point_eval(f, m) * c.inv() + (one - box_eval(fd, X) * c.inv()) * (X - m);
    if (out) *out = K;
    return K.strictly_inside(X);
}

// contract a certified box below `precision` width
QBox contract(const ZPoly& f, const ZPoly& fd, QBox X, const QQ& precision) {
    unsigned long g = grid_bits(precision) + 32;
    int stall = 0;
    while (X.width() > precision) {
        QBox m = round_out(X.mid(), g);
        QBox c = point_eval(fd, m);
        bool have = false;
        if (!c.norm2().contains_zero()) {
            QBox K =
                m - point_eval(f, m) * c.inv() + (QBox(QQ(1)) - box_eval(fd, X) * c.inv()) * (X - m);
            QBox Y{QIv::intersect(K.re, X.re), QIv::intersect(K.im, X.im)};
            if (Y.valid() && Y.width() < X.width()) {
                X = round_out(Y, g);
                have = true;
                stall = 0;
            }
        }
        if (!have) {
            if (++stall > 64) throw std::logic_error("alg: box contraction stalled");
            // bisect around an interior point instead
            QBox Y{QIv{(X.re.lo + X.re.mid()) / 2, (X.re.hi + X.re.mid()) / 2},
                   QIv{(X.im.lo + X.im.mid()) / 2, (X.im.hi + X.im.mid()) / 2}};
            Y = round_out(Y, g);
            if (krawczyk_certify(f, fd, Y)) X = Y;
            else throw std::logic_error("alg: box contraction failed");
        }
    }
    return X;
}

// isolate all roots of an irreducible polynomial
std::vector<QBox> isolate_roots(const ZPoly& g, const QQ& precision) {
    if (g.degree() == 1) {
        QQ v = QQ(-g.coeff(0)) / g.coeff(1);
        return {QBox(v)};
    }
    ZPoly gd = g.derivative();
    unsigned prec = 192;
    ZZ maxc = 0;
    for (auto& c : g.coeffs()) maxc = std::max(maxc, zabs(c));
    prec += (unsigned)mpz_sizeinbase(maxc.get_mpz_t(), 2);
    for (int attempt = 0; attempt < 12; ++attempt, prec *= 2) {
        auto approx = approximate_roots(g, prec);
        // box radius from pairwise separation
        mpf_class sep(-1, prec);
        for (size_t i = 0; i < approx.size(); ++i)
            for (size_t j = i + 1; j < approx.size(); ++j) {
                mpf_class d2 = (approx[i] - approx[j]).norm();
                if (sep < 0 || d2 < sep) sep = d2;
            }
        if (sep <= 0) continue;
        // dyadic radius: well below both the root separation and the expected
        // approximation error, but not so small that certification can't succeed
        QQ srad = mpf_to_q(sqrt(sep)) / 4;
        unsigned long k = prec / 4;
        QQ radius = qpow(QQ(1, 2), (long)k);
        while (radius > srad && k < prec / 2) {
            radius = radius / 2;
            ++k;
        }
        if (radius > srad) continue;  // separation too small at this precision
        unsigned long grid = k + 8;
        std::vector<QBox> boxes;
        bool ok = true;
        for (auto& w : approx) {
            QQ re = dyadic(mpf_to_q(w.re), grid, false), im = dyadic(mpf_to_q(w.im), grid, false);
            QBox X{QIv{re - radius, re + radius}, QIv{im - radius, im + radius}};
            if (!krawczyk_certify(g, gd, X)) { ok = false; break; }
            boxes.push_back(X);
        }
        if (!ok) continue;
        for (size_t i = 0; i < boxes.size() && ok; ++i)
            for (size_t j = i + 1; j < boxes.size(); ++j)
                if (!boxes[i].disjoint(boxes[j])) { ok = false; break; }
        if (!ok) continue;
        for (auto& X : boxes) X = contract(g, gd, X, precision);
        return boxes;
    }
    throw std::logic_error("alg: root isolation failed to certify");
}

bool box_less(const QBox& a, const QBox& b) {
    QQ ra = a.re.mid(), rb = b.re.mid();
    if (ra != rb) return ra < rb;
    return a.im.mid() < b.im.mid();
}

}  // namespace

AlgebraicNumber alg_from_rational(const QQ& v) {
    ZPoly m(std::vector<ZZ>{ZZ(-v.get_num()), ZZ(v.get_den())});
    return {m.primitive_part(), QBox(v)};
}

std::vector<AlgebraicNumber> roots_of(const ZPoly& f, const QQ& precision) {
    if (f.is_zero()) throw std::invalid_argument("roots_of: zero polynomial");
    if (f.degree() == 0) return {};
    std::vector<AlgebraicNumber> out;
    for (auto& [g, mult] : factor_over_int(f)) {
        (void)mult;
        for (auto& X : isolate_roots(g, precision)) out.push_back({g, X});
    }
    std::sort(out.begin(), out.end(),
              [](const AlgebraicNumber& a, const AlgebraicNumber& b) {
                  return box_less(a.box, b.box);
              });
    return out;
}

AlgebraicNumber alg_refine(const AlgebraicNumber& a, const QQ& precision) {
    if (a.box.width() <= precision) return a;
    if (a.is_rational()) return {a.minpoly, QBox(a.rational_value())};
    return {a.minpoly, contract(a.minpoly, a.minpoly.derivative(), a.box, precision)};
}

bool alg_is_zero(const AlgebraicNumber& a) { return a.minpoly == ZPoly::x(); }

bool alg_is_one(const AlgebraicNumber& a) {
    return a.minpoly == ZPoly(std::vector<ZZ>{-1, 1});
}

bool AlgebraicNumber::is_real() const {
    if (is_rational()) return true;
    AlgebraicNumber a = *this;
    while (true) {
        if (!a.box.im.contains_zero()) return false;
        // a sign change across the box's real extent certifies a real root there,
        // which must be the boxed root (the box isolates exactly one)
        QQ vlo = minpoly.eval(a.box.re.lo), vhi = minpoly.eval(a.box.re.hi);
        if ((vlo < 0) != (vhi < 0)) return true;
        a = alg_refine(a, a.box.width() / 4);
    }
}

bool alg_equal(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (!(a.minpoly == b.minpoly)) return false;
    if (a.is_rational()) return true;
    AlgebraicNumber x = a, y = b;
    while (true) {
        if (x.box.disjoint(y.box)) return false;
        QQ w = std::max(x.box.width(), y.box.width());
        // distinct roots separate the boxes under refinement; a shared root keeps
        // them overlapping, and once the tightly-refined x sits inside y the roots
        // coincide (y isolates exactly one root)
        x = alg_refine(x, w / 64);
        y = alg_refine(y, w / 4);
        if (x.box.re.lo >= y.box.re.lo && x.box.re.hi <= y.box.re.hi &&
            x.box.im.lo >= y.box.im.lo && x.box.im.hi <= y.box.im.hi)
            return true;
    }
}

}  // namespace abctk
