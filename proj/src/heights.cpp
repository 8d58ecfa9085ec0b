#include "abctk/heights.hpp"

#include "abctk/fp.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace abctk {

namespace {

constexpr unsigned kLogBits = 128;

std::vector<ZZ> distinct_primes(const ZZ& n) {
    std::vector<ZZ> out;
    if (n == 0) return out;
    for (auto& [p, e] : factor_integer(zabs(n))) {
        (void)e;
        out.push_back(p);
    }
    return out;
}

// monic integer minimal polynomial of lc(F)·α from the minimal polynomial F of α
ZPoly monicize(const ZPoly& F) {
    int d = F.degree();
    ZZ c = F.lc();
    std::vector<ZZ> g((size_t)d + 1);
    g[(size_t)d] = 1;
    for (int i = 0; i < d; ++i) g[(size_t)i] = F.coeff((size_t)i) * zpow(c, (unsigned long)(d - 1 - i));
    return ZPoly(std::move(g));
}

bool fp_divides_poly(const ZPoly& h, const FpPoly& target, const ZZ& p) {
    if (fp_degree(target) < 0) return true;
    FpPoly hb = fp_reduce(h, p);
    return fp_degree(fp_divmod(target, hb, p).second) < 0;
}

// Dedekind's criterion: p divides the index [O_K : Z[θ]] iff
// gcd((g − u·v)/p, u, v) is nonconstant mod p, where u = ∏h̄ᵢ, v = ḡ/u
bool dedekind_regular(const ZPoly& g, const ZZ& p,
                      const std::vector<std::pair<ZPoly, int>>& factors) {
    FpPoly u{ZZ(1)}, v{ZZ(1)};
    for (auto& [h, e] : factors) {
        FpPoly hb = fp_reduce(h, p);
        u = fp_mul(u, hb, p);
        for (int i = 1; i < e; ++i) v = fp_mul(v, hb, p);
    }
    ZPoly T = g - fp_lift(u) * fp_lift(v);
    std::vector<ZZ> tc;
    for (auto& c : T.coeffs()) tc.push_back(zdivexact(c, p));
    FpPoly Tbar = fp_reduce(ZPoly(std::move(tc)), p);
    FpPoly w = fp_gcd(Tbar, fp_gcd(u, v, p), p);
    return fp_degree(w) <= 0;
}

std::vector<std::pair<QQ, int>> positive_slopes(const ZPoly& f, const ZZ& p) {
    std::vector<std::pair<QQ, int>> out;
    for (auto& ent : newton_slopes(f, p))
        if (ent.first > 0) out.push_back(ent);
    return out;
}

// For the factor h̄ = x of ḡ with p | e0 (α = θ/e0): decide whether the place
// meets the support, using Newton polygons for the exact valuation of θ.
// Returns 0 = no, 1 = yes, 2 = undecidable here.
int polygon_decide(const ZPoly& g, const ZZ& p, int e, long m, const ZZ& e0) {
    auto pos = positive_slopes(g, p);
    if (pos.size() != 1 || pos[0].second != e) return 2;
    if (pos[0].first != QQ(m)) return 1;  // v(α) ≠ 0 at this place
    ZPoly gpsi = g.compose(ZPoly(std::vector<ZZ>{e0, ZZ(-1)}));  // minpoly of e0 − θ
    auto pos2 = positive_slopes(gpsi, p);
    if (pos2.size() != 1 || pos2[0].second != e) return 2;
    return pos2[0].first > QQ(m) ? 1 : 0;  // v(1−α) > 0 ?
}

// Shared conductor counting over K = Q[x]/g for the element β = N(θ)/e0.
ConductorResult conductor_core(const ZPoly& g, int D, const ZPoly& N, const ZZ& e0,
                               const std::vector<ZZ>& primes, bool alpha_mode) {
    ConductorResult out;
    out.value = QIv(QQ(0));
    for (const ZZ& p : primes) {
        auto factors = factor_mod_p(g, p);
        bool regular = dedekind_regular(g, p, factors);
        long m = zval(e0, p);
        FpPoly Nbar = fp_reduce(N, p);
        FpPoly Obar = fp_reduce(ZPoly(e0) - N, p);  // numerator of 1 − β
        QQ lo(0), hi(0);
        for (auto& [h, e] : factors) {
            int fdeg = h.degree();
            int decide;
            if (m == 0) {
                // v(β) > 0 ⟺ h̄ | N̄; v(1−β) > 0 ⟺ h̄ | (e0 − N); no poles
                decide = (fp_divides_poly(h, Nbar, p) || fp_divides_poly(h, Obar, p)) ? 1 : 0;
            } else if (!fp_divides_poly(h, Nbar, p)) {
                decide = 1;  // v(N(θ)) = 0 on every place above h̄, so v(β) = −e_v·m < 0
            } else if (alpha_mode && fdeg == 1 && h.coeff(0) == 0) {
                decide = polygon_decide(g, p, e, m, e0);
            } else {
                decide = 2;
            }
            bool sharp = regular || e == 1;
            if (decide == 1) {
                lo += fdeg;
                hi += QQ(sharp ? fdeg : e * fdeg);
            } else if (decide == 2) {
                hi += QQ(sharp ? fdeg : e * fdeg);
            }
        }
        if (regular)
            out.regular_primes.push_back(p);
        else if (lo != hi)
            out.irregular_primes.push_back(p);
        if (lo != hi) out.exact = false;
        if (hi > 0)
            out.value = out.value + log_enclosure(QQ(p), kLogBits) * QIv(lo / D, hi / D);
    }
    if (out.value.lo < 0) out.value.lo = 0;
    return out;
}

// ---- exact quadratic-field data ----

struct QuadData {
    ZZ D;     // squarefree core: the field is Q(sqrt(D))
    ZZ disc;  // field discriminant: D when D = 1 mod 4, else 4D
};

std::optional<QuadData> quad_data(const AlgebraicNumber& a) {
    if (a.degree() != 2) return std::nullopt;
    const ZPoly& F = a.minpoly;
    ZZ delta = F.coeff(1) * F.coeff(1) - 4 * F.coeff(2) * F.coeff(0);
    ZZ D(1);
    for (auto& [p, e] : factor_integer(zabs(delta)))
        if (e % 2) D *= p;
    if (delta < 0) D = -D;
    QuadData q;
    q.D = D;
    ZZ r = ((D % 4) + 4) % 4;
    q.disc = (r == 1) ? D : 4 * D;
    return q;
}

// e, f, g of the prime p in Q(sqrt(D))
void quad_split(const QuadData& q, const ZZ& p, int& e, int& f, int& g) {
    if (q.disc % p == 0) {
        e = 2, f = 1, g = 1;
        return;
    }
    e = 1;
    int k = mpz_kronecker(q.disc.get_mpz_t(), p.get_mpz_t());
    if (k == 1)
        f = 1, g = 2;
    else
        f = 2, g = 1;
}

// The compositum of two quadratic fields with coprime discriminants has
// maximal order O_1 O_2; its discriminant is (d_1 d_2)^2 and the splitting of
// a prime combines the two quadratic splittings (p is unramified in at least
// one factor): e = e_1 e_2, f = lcm(f_1, f_2), g = 4 / (e f).
struct CompositumData {
    QuadData q1, q2;
};

std::optional<CompositumData> compositum_data(const AlgebraicNumber& a,
                                              const AlgebraicNumber& b) {
    auto q1 = quad_data(a), q2 = quad_data(b);
    if (!q1 || !q2) return std::nullopt;
    if (q1->D == q2->D) return std::nullopt;  // same field: not a quartic compositum
    if (zgcd(q1->disc, q2->disc) != 1) return std::nullopt;
    return CompositumData{*q1, *q2};
}

void compositum_split(const CompositumData& c, const ZZ& p, int& e, int& f, int& g) {
    int e1, f1, g1, e2, f2, g2;
    quad_split(c.q1, p, e1, f1, g1);
    quad_split(c.q2, p, e2, f2, g2);
    e = e1 * e2;
    f = std::lcm(f1, f2);
    g = 4 / (e * f);
}

void require_not_support(const ProjPoint& P) {
    if (P.is_infinity() || alg_is_zero(P.x1) || alg_is_one(P.x1))
        throw std::domain_error("conductor: point lies in the support {0,1,inf}");
}

}  // namespace

QIv height_point(const ProjPoint& P, const QQ& precision) {
    if (P.is_infinity()) return QIv(QQ(0));
    return weil_height(P.x1, precision);
}

ConductorResult conductor(const ProjPoint& P) {
    require_not_support(P);
    const AlgebraicNumber& alpha = P.x1;
    if (alpha.is_rational()) {
        QQ v = alpha.rational_value();
        ZZ a = v.get_num(), c = v.get_den();
        ConductorResult out;
        out.value = QIv(QQ(0));
        for (auto& p : distinct_primes(a * c * (c - a))) {
            out.regular_primes.push_back(p);
            out.value = out.value + log_enclosure(QQ(p), kLogBits);
        }
        return out;
    }
    const ZPoly& F = alpha.minpoly;
    ZPoly g = monicize(F);
    ZZ scope = F.coeff(0) * F.eval(ZZ(1)) * F.lc();
    return conductor_core(g, F.degree(), ZPoly::x(), F.lc(), distinct_primes(scope), true);
}

RootDiscResult log_root_disc(const ProjPoint& P) {
    RootDiscResult out;
    out.value = QIv(QQ(0));
    if (P.is_infinity() || P.x1.is_rational()) return out;
    const ZPoly& F = P.x1.minpoly;
    ZPoly g = monicize(F);
    int d = g.degree();
    out.field_degree = d;
    ZZ disc = discriminant(g);
    for (auto& [p, e] : factor_integer(zabs(disc))) {
        long vlo = e, vhi = e;
        if (e >= 2 && !dedekind_regular(g, p, factor_mod_p(g, p))) {
            // p divides the index; v_p(D_K) = e − 2·v_p(index), parity preserved
            vlo = e % 2;
            vhi = e - 2;
            out.exact = false;
        }
        if (vhi > 0)
            out.value = out.value + log_enclosure(QQ(p), kLogBits) * QIv(QQ(vlo, d), QQ(vhi, d));
    }
    if (out.value.lo < 0) out.value.lo = 0;
    return out;
}

RootDiscResult log_root_disc_pair(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    // exact routes: the whole field is quadratic, or a quartic compositum of
    // two quadratic fields with coprime discriminants
    auto qa = quad_data(a), qb = quad_data(b);
    auto from_disc = [](const ZZ& absdisc, int deg) {
        RootDiscResult out;
        out.field_degree = deg;
        out.value = absdisc == 1 ? QIv(QQ(0)) : log_enclosure(QQ(absdisc), kLogBits) * QQ(1, deg);
        return out;
    };
    if (a.is_rational() && b.is_rational()) return from_disc(ZZ(1), 1);
    if (a.is_rational() && qb) return from_disc(zabs(qb->disc), 2);
    if (b.is_rational() && qa) return from_disc(zabs(qa->disc), 2);
    if (qa && qb && qa->D == qb->D) return from_disc(zabs(qa->disc), 2);
    if (auto c = compositum_data(a, b))
        return from_disc(zabs(c->q1.disc * c->q2.disc) * zabs(c->q1.disc * c->q2.disc), 4);
    PrimitiveElementResult pe = primitive_element(a, b);
    return log_root_disc(ProjPoint::affine(pe.gamma));
}

LiouvilleGap liouville_gap(const ProjPoint& a, const ProjPoint& b, const PlaceQ& v,
                           const QQ& precision) {
    bool equal = a.is_infinity() ? b.is_infinity()
                                 : (!b.is_infinity() && alg_equal(a.x1, b.x1));
    if (equal) throw std::domain_error("liouville_gap: points coincide");
    int da = a.is_infinity() ? 1 : a.x1.degree();
    int db = b.is_infinity() ? 1 : b.x1.degree();
    QQ hp = precision / (8 * da * db);
    QIv hsum = height_point(a, hp) + height_point(b, hp) + log_enclosure(QQ(2), kLogBits);
    LiouvilleGap out;
    out.rhs = hsum * QQ(da * db);
    // −log δ needs relative accuracy in δ, so tighten adaptively
    QQ dprec = std::min(precision, QQ(1, 1024));
    bool got = false;
    for (int attempt = 0; attempt < 12 && !got; ++attempt, dprec = dprec * qpow(QQ(1, 2), 16)) {
        QIv delta = chordal_distance(a, b, v, dprec);
        if (delta.lo <= 0) continue;
        QIv lhs{-log_enclosure(delta.hi, kLogBits).hi, -log_enclosure(delta.lo, kLogBits).lo};
        if (lhs.lo < 0) lhs.lo = 0;
        out.lhs = lhs;
        got = lhs.width() <= precision || v.finite;  // finite places may carry cluster width
    }
    if (!got) throw std::logic_error("liouville_gap: could not bound the distance away from zero");
    // the inequality can be an exact equality (e.g. a=1, b=−1, v=2), which outward
    // rounding can never certify; `holds` reports "no certified violation"
    out.holds = out.lhs.lo <= out.rhs.hi;
    return out;
}

bool in_compact_set(const ProjPoint& P, const std::vector<PlaceQ>& sigma, const QQ& eta) {
    if (eta <= 0 || eta > 1) throw std::invalid_argument("in_compact_set: eta outside (0,1]");
    if (sigma.empty()) return true;
    if (P.is_infinity() || alg_is_zero(P.x1) || alg_is_one(P.x1)) return false;
    const AlgebraicNumber& alpha = P.x1;
    if (alpha.is_rational()) {
        QQ x = alpha.rational_value();
        for (const PlaceQ& v : sigma) {
            if (v.finite) {
                auto absp = [&](const QQ& t) { return qpow(QQ(v.p), -qval(t, v.p)); };
                if (absp(x) < eta || absp(1 - x) < eta || absp(x) > QQ(1) / eta) return false;
            } else {
                if (qabs(x) < eta || qabs(1 - x) < eta || qabs(x) > QQ(1) / eta) return false;
            }
        }
        return true;
    }
    const ZPoly& F = alpha.minpoly;
    for (const PlaceQ& v : sigma) {
        if (v.finite) {
            // p^{-s} ≥ η for every Newton slope s of α, 1−α and 1/α
            auto check = [&](const ZPoly& f) {
                for (auto& [s, cnt] : newton_slopes(f, v.p)) {
                    (void)cnt;
                    // p^{-s} ≥ η  ⟺  p^{-num(s)} ≥ η^{den(s)}
                    long u = s.get_num().get_si();
                    long w = s.get_den().get_si();
                    if (qpow(QQ(v.p), -u) < qpow(eta, w)) return false;
                }
                return true;
            };
            ZPoly Fone = F.compose(ZPoly(std::vector<ZZ>{ZZ(1), ZZ(-1)}));  // roots 1−α
            if (!check(F) || !check(Fone) || !check(F.reverse())) return false;
        } else {
            QQ eta2 = eta * eta, inv2 = QQ(1) / (eta * eta);
            QQ eps(1, 1 << 12);
            for (int attempt = 0;; ++attempt, eps = eps / 16) {
                if (attempt >= 24)
                    throw std::logic_error("in_compact_set: boundary case did not resolve");
                auto conj = roots_of(F, eps);
                int verdict = 1;  // 1 ok, 0 fail, -1 refine
                for (auto& r : conj) {
                    QIv n2 = r.box.norm2();
                    QIv m2 = (QBox(QQ(1)) - r.box).norm2();
                    if (n2.hi < eta2 || m2.hi < eta2 || n2.lo > inv2) { verdict = 0; break; }
                    if (n2.lo < eta2 || m2.lo < eta2 || n2.hi > inv2) verdict = -1;
                }
                if (verdict == 0) return false;
                if (verdict == 1) break;
            }
        }
    }
    return true;
}

ConductorResult conductor_pullback(const std::pair<AlgebraicNumber, AlgebraicNumber>& q_field,
                                   const AlgebraicNumber& value) {
    if (alg_is_zero(value) || alg_is_one(value))
        throw std::domain_error("conductor_pullback: value lies in the support {0,1,inf}");
    // exact route: rational value over a quartic compositum of two quadratic
    // fields with coprime discriminants; every place above a meeting prime
    // meets the support, with identical residue degree data
    if (value.is_rational()) {
        if (auto comp = compositum_data(q_field.first, q_field.second)) {
            QQ beta = value.rational_value();
            ZZ num = beta.get_num(), den = beta.get_den();
            ConductorResult out;
            out.value = QIv(QQ(0));
            for (auto& p : distinct_primes(num * den * (den - num))) {
                int e, f, g;
                compositum_split(*comp, p, e, f, g);
                out.regular_primes.push_back(p);
                out.value = out.value + log_enclosure(QQ(p), kLogBits) * QQ(f * g, 4);
            }
            return out;
        }
    }
    PrimitiveElementResult field = primitive_element(q_field.first, q_field.second);
    int D = field.gamma.degree();
    PrimitiveElementResult ext = primitive_element(field.gamma, value);
    if (ext.gamma.degree() != D)
        throw std::domain_error("conductor_pullback: value is not in the field of Q");
    const ZPoly& Fd = ext.gamma.minpoly;  // generator δ of Q(Q), with value = expr_b(δ)
    ZPoly g = monicize(Fd);
    ZZ cd = Fd.lc();
    // rewrite expr_b in terms of the integral generator θ = cd·δ
    const QPoly& E = ext.expr_b;
    int dE = std::max(E.num.degree(), 0);
    std::vector<ZZ> nc((size_t)dE + 1, ZZ(0));
    for (int i = 0; i <= E.num.degree(); ++i)
        nc[(size_t)i] = E.num.coeff((size_t)i) * zpow(cd, (unsigned long)(dE - i));
    QPoly Etheta(ZPoly(std::move(nc)), E.den * zpow(cd, (unsigned long)dE));
    const ZPoly& Fb = value.minpoly;
    ZZ scope = Fb.coeff(0) * Fb.eval(ZZ(1)) * Fb.lc();
    return conductor_core(g, D, Etheta.num, Etheta.den, distinct_primes(scope), false);
}

}  // namespace abctk
