#include "abctk/belyi.hpp"

#include "abctk/fp.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace abctk {

namespace {

using nlohmann::json;

struct ResourceFail {
    std::string reason;
};
struct StageFail {
    std::string reason;
};

ZPoly zp(std::vector<long> cs) {
    std::vector<ZZ> v;
    v.reserve(cs.size());
    for (long c : cs) v.emplace_back(c);
    return ZPoly(std::move(v));
}

// linear polynomial with root r = a/b: b*z - a
ZPoly linear_for(const QQ& r) {
    ZZ a = r.get_num(), b = r.get_den();
    return ZPoly(std::vector<ZZ>{ZZ(-a), b}).primitive_part();
}

QQ root_of_linear(const ZPoly& u) { return QQ(-u.coeff(0)) / u.coeff(1); }

}  // namespace

// ---- RationalMapP1 basics ----

RationalMapP1 p1_map(ZPoly num, ZPoly den) {
    if (den.is_zero()) throw std::invalid_argument("p1_map: zero denominator");
    ZPoly g = poly_gcd(num, den);
    if (g.degree() > 0) {
        num = num.divexact(g);
        den = den.divexact(g);
    }
    ZZ c = zgcd(num.content(), den.content());
    if (c > 1) {
        num = num.divexact(ZPoly(c)) * ZZ(1);
        den = den.divexact(ZPoly(c)) * ZZ(1);
    }
    if (den.lc() < 0) {
        num = -num;
        den = -den;
    }
    return {std::move(num), std::move(den)};
}

RationalMapP1 p1_identity() { return {ZPoly::x(), ZPoly(ZZ(1))}; }

namespace {

// (sum f_j n^j d^(D-j), d^D) homogenized to degree D >= deg f
std::pair<ZPoly, ZPoly> homog_eval(const ZPoly& f, int D, const ZPoly& n, const ZPoly& d) {
    ZPoly acc;
    ZPoly npow(ZZ(1));
    std::vector<ZPoly> dpows((size_t)D + 1);
    dpows[0] = ZPoly(ZZ(1));
    for (int i = 1; i <= D; ++i) dpows[(size_t)i] = dpows[(size_t)(i - 1)] * d;
    for (int j = 0; j <= D; ++j) {
        ZZ cj = f.coeff((size_t)j);
        if (cj != 0) acc = acc + npow * dpows[(size_t)(D - j)] * cj;
        if (j < D) npow = npow * n;
    }
    return {acc, dpows[(size_t)D]};
}

}  // namespace

RationalMapP1 p1_compose(const RationalMapP1& f, const RationalMapP1& g) {
    int D = f.degree();
    auto [nn, nd] = homog_eval(f.num, D, g.num, g.den);
    auto [dn, dd] = homog_eval(f.den, D, g.num, g.den);
    (void)nd;
    (void)dd;
    // the homogenized composition of coprime pairs is coprime: a common root
    // z0 with g.den(z0) != 0 would be a common root of (f.num, f.den) at
    // g(z0), and one with g.den(z0) = 0 would force both leading coefficients
    // of f below top degree; so only the integer content needs stripping
    ZZ c = zgcd(nn.content(), dn.content());
    if (c > 1) {
        nn = nn.divexact(ZPoly(c));
        dn = dn.divexact(ZPoly(c));
    }
    if (dn.lc() < 0) {
        nn = -nn;
        dn = -dn;
    }
    return {std::move(nn), std::move(dn)};
}

std::string p1_map_to_string(const RationalMapP1& f) {
    std::string s = "(" + poly_to_string(f.num, "z") + ")";
    if (f.den.degree() > 0 || f.den.coeff(0) != 1)
        s += " / (" + poly_to_string(f.den, "z") + ")";
    return s;
}

std::optional<RationalMapP1> parse_p1_map(const std::string& s) {
    auto strip = [](std::string t) {
        size_t a = t.find_first_not_of(" \t");
        size_t b = t.find_last_not_of(" \t");
        if (a == std::string::npos) return std::string();
        t = t.substr(a, b - a + 1);
        if (t.size() >= 2 && t.front() == '(' && t.back() == ')') {
            int depth = 0;
            bool wraps = true;
            for (size_t i = 0; i < t.size(); ++i) {
                if (t[i] == '(') ++depth;
                if (t[i] == ')') --depth;
                if (depth == 0 && i + 1 < t.size()) {
                    wraps = false;
                    break;
                }
            }
            if (wraps) t = t.substr(1, t.size() - 2);
        }
        return t;
    };
    // split on a top-level '/'
    int depth = 0;
    size_t pos = std::string::npos;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0 && s[i] == '/') {
            pos = i;
            break;
        }
    }
    std::string ns = pos == std::string::npos ? s : s.substr(0, pos);
    std::string ds = pos == std::string::npos ? "1" : s.substr(pos + 1);
    auto np = parse_poly(strip(ns), "z");
    auto dp = parse_poly(strip(ds), "z");
    if (!np || !dp || dp->is_zero()) return std::nullopt;
    return p1_map(*np, *dp);
}

std::string P1Rat::str() const { return inf ? "inf" : qq_to_string(v); }

P1Rat p1_eval_rat(const RationalMapP1& f, const P1Rat& t) {
    if (t.inf) {
        int dn = f.num.degree(), dd = f.den.degree();
        if (dn > dd) return P1Rat::infinity();
        if (dn < dd) return P1Rat::of(QQ(0));
        return P1Rat::of(QQ(f.num.lc()) / f.den.lc());
    }
    QQ n = f.num.eval(t.v), d = f.den.eval(t.v);
    if (d == 0) return P1Rat::infinity();
    return P1Rat::of(n / d);
}

ProjPoint p1_eval(const RationalMapP1& f, const ProjPoint& P, const QQ& precision) {
    if (P.is_infinity()) {
        P1Rat w = p1_eval_rat(f, P1Rat::infinity());
        return w.inf ? ProjPoint::infinity() : ProjPoint::affine(alg_from_rational(w.v));
    }
    AlgebraicNumber a = alg_mul(alg_inv(P.x0), P.x1);
    if (a.is_rational()) {
        P1Rat w = p1_eval_rat(f, P1Rat::of(a.rational_value()));
        return w.inf ? ProjPoint::infinity() : ProjPoint::affine(alg_from_rational(w.v));
    }
    QQ den_scale(1);
    AlgebraicNumber n = alg_from_rational(QQ(0)), d = alg_from_rational(QQ(0));
    {
        QPoly qn(f.num), qd(f.den);
        n = alg_eval_qpoly(qn, a);
        d = alg_eval_qpoly(qd, a);
    }
    (void)den_scale;
    if (alg_is_zero(d)) return ProjPoint::infinity();
    return ProjPoint::affine(alg_mul(n, alg_inv(d)));
}

namespace {

// eliminate z from {u(z) = 0, X = f(z)}: returns the char. polynomial of the
// image values in X (degree may drop when some root maps to infinity)
ZPoly image_charpoly(const ZPoly& u, const RationalMapP1& f) {
    std::vector<ZPoly> A, B;
    int du = u.degree();
    for (int k = 0; k <= du; ++k) A.push_back(ZPoly(u.coeff((size_t)k)));
    int dm = std::max(f.num.degree(), f.den.degree());
    for (int k = 0; k <= dm; ++k) {
        ZZ nk = f.num.coeff((size_t)k), dk = f.den.coeff((size_t)k);
        B.push_back(ZPoly(std::vector<ZZ>{ZZ(-nk), dk}));
    }
    return biv_resultant_y(A, B);
}

struct ImageSet {
    std::vector<ZPoly> factors;  // irreducible, values outside {0,1,inf}
    bool hit0 = false, hit1 = false, hitinf = false;
};

void classify_value(const QQ& w, ImageSet& out) {
    if (w == 0)
        out.hit0 = true;
    else if (w == 1)
        out.hit1 = true;
    else
        out.factors.push_back(linear_for(w));
}

ImageSet image_of_factor(const ZPoly& u, const RationalMapP1& f) {
    ImageSet out;
    if (u.degree() == 1) {
        P1Rat w = p1_eval_rat(f, P1Rat::of(root_of_linear(u)));
        if (w.inf)
            out.hitinf = true;
        else
            classify_value(w.v, out);
        return out;
    }
    ZPoly R = image_charpoly(u, f);
    if (R.degree() < u.degree()) out.hitinf = true;  // some root maps to infinity
    if (R.degree() >= 1) {
        for (auto& [w, mult] : factor_over_int(R)) {
            (void)mult;
            if (w.degree() < 1) continue;
            if (w.degree() == 1) {
                classify_value(root_of_linear(w), out);
            } else {
                out.factors.push_back(w);
            }
        }
    }
    return out;
}

// ramification index of f at z = infinity, and the value there
std::pair<int, P1Rat> inf_ram(const RationalMapP1& f) {
    int dn = f.num.degree(), dd = f.den.degree();
    if (dn > dd) return {dn - dd, P1Rat::infinity()};
    if (dn < dd) return {dd - dn, P1Rat::of(QQ(0))};
    QQ w = QQ(f.num.lc()) / f.den.lc();
    ZPoly u = f.num * w.get_den() - f.den * w.get_num();
    return {dn - u.degree(), P1Rat::of(w)};
}

}  // namespace

bool p1_is_belyi(const RationalMapP1& f) {
    if (f.is_constant()) return false;
    ZPoly wr = f.num.derivative() * f.den - f.num * f.den.derivative();
    if (!wr.is_zero()) {
        ZPoly nm1 = f.num - f.den;
        for (auto& [w, mult] : factor_over_int(wr)) {
            (void)mult;
            if (w.degree() < 1) continue;
            if (!f.num.divides(w) && !f.den.divides(w) && !nm1.divides(w)) return false;
        }
    }
    auto [e, w] = inf_ram(f);
    if (e >= 2 && !w.in_013()) return false;
    return true;
}

P1CriticalData p1_critical_values(const RationalMapP1& f, const QQ& precision) {
    P1CriticalData out;
    out.all_in_013 = true;
    bool have0 = false, have1 = false, haveinf = false;
    auto add_rat = [&](const P1Rat& w) {
        if (w.inf) {
            haveinf = true;
            return;
        }
        if (w.v == 0) {
            have0 = true;
            return;
        }
        if (w.v == 1) {
            have1 = true;
            return;
        }
        out.all_in_013 = false;
        for (auto& p : out.values)
            if (!p.is_infinity()) {
                AlgebraicNumber a = alg_mul(alg_inv(p.x0), p.x1);
                if (a.is_rational() && a.rational_value() == w.v) return;
            }
        out.values.push_back(ProjPoint::affine(alg_from_rational(w.v)));
    };
    ZPoly wr = f.num.derivative() * f.den - f.num * f.den.derivative();
    ZPoly nm1 = f.num - f.den;
    if (!wr.is_zero()) {
        for (auto& [w, mult] : factor_over_int(wr)) {
            (void)mult;
            if (w.degree() < 1) continue;
            if (f.num.divides(w)) {
                have0 = true;
            } else if (f.den.divides(w)) {
                haveinf = true;
            } else if (nm1.divides(w)) {
                have1 = true;
            } else {
                out.all_in_013 = false;
                ZPoly R = squarefree_part(image_charpoly(w, f));
                for (auto& a : roots_of(R, precision)) out.values.push_back(ProjPoint::affine(a));
            }
        }
    }
    auto [e, w] = inf_ram(f);
    if (e >= 2) add_rat(w);
    if (have0) out.values.push_back(ProjPoint::affine(alg_from_rational(QQ(0))));
    if (have1) out.values.push_back(ProjPoint::affine(alg_from_rational(QQ(1))));
    if (haveinf) out.values.push_back(ProjPoint::infinity());
    return out;
}

// ---- the P^1 Belyi engine ----

namespace {

struct BState {
    RationalMapP1 cur = p1_identity();
    std::vector<ZPoly> obls;  // irreducible minimal polynomials, values outside {0,1,inf}
    bool occ0 = false, occ1 = false, occinf = false;
    P1Rat track = P1Rat::of(QQ(0));
    std::vector<BelyiStage> stages;
    const BelyiLimits* lim = nullptr;

    void add_obl(const ZPoly& u) {
        for (auto& v : obls)
            if (v == u) return;
        obls.push_back(u);
    }

    void check_resources() const {
        if (cur.degree() > lim->max_degree)
            throw ResourceFail{"composite degree " + std::to_string(cur.degree()) +
                               " exceeds ceiling " + std::to_string(lim->max_degree)};
        ZZ mx = 0;
        for (const ZZ& c : cur.num.coeffs()) mx = std::max(mx, zabs(c));
        for (const ZZ& c : cur.den.coeffs()) mx = std::max(mx, zabs(c));
        if (mx > 0 && (long)mpz_sizeinbase(mx.get_mpz_t(), 2) > lim->max_coeff_bits)
            throw ResourceFail{"coefficient size exceeds ceiling of " +
                               std::to_string(lim->max_coeff_bits) + " bits"};
        if ((int)stages.size() > lim->max_stages)
            throw ResourceFail{"stage count exceeds ceiling"};
    }

    double log_height() const {
        ZZ mx = 1;
        for (const ZZ& c : cur.num.coeffs()) mx = std::max(mx, zabs(c));
        for (const ZZ& c : cur.den.coeffs()) mx = std::max(mx, zabs(c));
        return (double)mpz_sizeinbase(mx.get_mpz_t(), 2) * 0.6931471805599453;
    }
};

// apply stage map s; crit_pts are the (rational) critical points of s itself,
// which the track must avoid; the stage's own critical values are passed as
// {0,1,inf}-occupancies plus extra factors
void apply_stage(BState& st, const RationalMapP1& s, const std::string& kind,
                 const std::string& text, const std::vector<P1Rat>& crit_pts, bool cv0,
                 bool cv1, bool cvinf, const std::vector<ZPoly>& cv_factors) {
    // projected composite degree, checked before any expensive composition
    long proj = (long)s.num.degree() > (long)s.den.degree() ? s.num.degree() : s.den.degree();
    long sdeg = proj;
    proj *= std::max(1, st.cur.degree());
    if (proj > st.lim->max_degree)
        throw ResourceFail{"projected composite degree " + std::to_string(proj) +
                           " exceeds ceiling " + std::to_string(st.lim->max_degree)};
    {
        auto maxbits = [](const RationalMapP1& m) {
            ZZ mx = 1;
            for (const ZZ& c : m.num.coeffs()) mx = std::max(mx, zabs(c));
            for (const ZZ& c : m.den.coeffs()) mx = std::max(mx, zabs(c));
            return (double)mpz_sizeinbase(mx.get_mpz_t(), 2);
        };
        double est = maxbits(s) + (double)sdeg * (maxbits(st.cur) + 1.0);
        if (est > (double)st.lim->max_coeff_bits)
            throw ResourceFail{"projected coefficient size exceeds ceiling of " +
                               std::to_string(st.lim->max_coeff_bits) + " bits"};
    }

    for (const auto& cp : crit_pts)
        if (st.track == cp)
            throw StageFail{"track hits a critical point of stage " + kind};

    std::vector<ZPoly> nobls;
    bool n0 = cv0, n1 = cv1, ninf = cvinf;
    auto push = [&](const ZPoly& u) {
        for (auto& v : nobls)
            if (v == u) return;
        nobls.push_back(u);
    };
    for (const auto& u : st.obls) {
        ImageSet img = image_of_factor(u, s);
        n0 = n0 || img.hit0;
        n1 = n1 || img.hit1;
        ninf = ninf || img.hitinf;
        for (auto& w : img.factors) push(w);
    }
    auto park = [&](bool occ, const P1Rat& pt) {
        if (!occ) return;
        P1Rat w = p1_eval_rat(s, pt);
        if (w.inf)
            ninf = true;
        else if (w.v == 0)
            n0 = true;
        else if (w.v == 1)
            n1 = true;
        else
            push(linear_for(w.v));
    };
    park(st.occ0, P1Rat::of(QQ(0)));
    park(st.occ1, P1Rat::of(QQ(1)));
    park(st.occinf, P1Rat::infinity());
    for (auto& w : cv_factors) push(w);

    P1Rat ntrack = p1_eval_rat(s, st.track);
    for (const auto& u : nobls)
        if (u.degree() == 1 && !ntrack.inf && root_of_linear(u) == ntrack.v)
            throw StageFail{"track collides with a branch value after stage " + kind};

    st.cur = p1_compose(s, st.cur);
    st.obls = std::move(nobls);
    st.occ0 = n0;
    st.occ1 = n1;
    st.occinf = ninf;
    st.track = ntrack;
    st.stages.push_back({kind, text});
    st.check_resources();
}

const std::vector<RationalMapP1>& s3_maps() {
    static const std::vector<RationalMapP1> maps = {
        p1_map(zp({0, 1}), zp({1})),   // z
        p1_map(zp({1, -1}), zp({1})),  // 1 - z
        p1_map(zp({1}), zp({0, 1})),   // 1/z
        p1_map(zp({-1, 1}), zp({0, 1})),  // 1 - 1/z
        p1_map(zp({1}), zp({1, -1})),     // 1/(1-z)
        p1_map(zp({0, 1}), zp({-1, 1})),  // z/(z-1)
    };
    return maps;
}

// quotient collapse of the quadratic factor u: postcompose ((z-g)/(z-g'))^2
// with fixed points g, g' swapped... the deck transposition exchanges the two
// roots, so the pair maps to a single rational value; the stage's critical
// values are 0 (at g) and infinity (at g')
void stage_collapse(BState& st, const ZPoly& u) {
    QQ m = QQ(-u.coeff(1)) / u.coeff(2);
    QQ p = QQ(u.coeff(0)) / u.coeff(2);
    // deterministic candidate fixed points by ascending height
    std::vector<QQ> cands;
    for (int h = 1; h <= 12; ++h)
        for (int b = 1; b <= h; ++b)
            for (int a = -h; a <= h; ++a) {
                if (zgcd(ZZ(a), ZZ(b)) != 1) continue;
                if (std::max(std::abs(a), b) != h) continue;
                cands.emplace_back(QQ(a) / b);
            }
    for (const QQ& g : cands) {
        QQ den2 = 2 * g - m;
        RationalMapP1 q;
        std::vector<P1Rat> crit;
        bool cvinf = false;
        if (den2 == 0) {
            // the partner fixed point is infinity: polynomial collapse (z-g)^2
            ZPoly lin = linear_for(g);
            q = p1_map(lin * lin, ZPoly(ZZ(g.get_den()) * g.get_den()));
            crit = {P1Rat::of(g), P1Rat::infinity()};
            cvinf = true;  // infinity is a critical point mapping to infinity
        } else {
            QQ gp = (g * m - 2 * p) / den2;
            if (gp == g) continue;
            ZPoly a = linear_for(g), b = linear_for(gp);
            // exact ((z-g)/(z-g'))^2: scale so the leading coefficients agree
            ZPoly num = a * ZZ(gp.get_den());
            ZPoly den = b * ZZ(g.get_den());
            q = p1_map(num * num, den * den);
            crit = {P1Rat::of(g), P1Rat::of(gp)};
            cvinf = true;
        }
        BState trial = st;
        try {
            apply_stage(trial, q, "collapse",
                        "quotient collapse of " + poly_to_string(u, "z") + " at g=" +
                            qq_to_string(g),
                        crit, /*cv0=*/true, /*cv1=*/false, cvinf, {});
        } catch (StageFail&) {
            continue;
        }
        // the quadratic pair must have collapsed to rational values
        bool stuck = false;
        for (auto& w : trial.obls)
            if (w.degree() >= 2 && w == u) stuck = true;
        if (stuck) continue;
        st = std::move(trial);
        return;
    }
    throw StageFail{"no admissible quotient collapse for " + poly_to_string(u, "z")};
}

void stage_minpoly(BState& st, const ZPoly& u) {
    RationalMapP1 mu = p1_map(u, ZPoly(ZZ(1)));
    // critical values of the polynomial stage: u at the roots of u', plus
    // infinity (totally ramified)
    ZPoly du = u.derivative();
    bool cv0 = false, cv1 = false;
    std::vector<ZPoly> cvf;
    std::vector<P1Rat> crit = {P1Rat::infinity()};
    if (du.degree() >= 1) {
        ImageSet img = image_of_factor(du.primitive_part(), mu);
        // du may be reducible; image_of_factor tolerates that here because the
        // charpoly route never assumes irreducibility of its first argument
        cv0 = img.hit0;
        cv1 = img.hit1;
        cvf = img.factors;
        for (auto& [w, mult] : factor_over_int(du)) {
            (void)mult;
            if (w.degree() == 1) crit.push_back(P1Rat::of(root_of_linear(w)));
        }
    }
    apply_stage(st, mu, "minpoly", "postcompose minimal polynomial " + poly_to_string(u, "z"),
                crit, cv0, cv1, /*cvinf=*/true, cvf);
}

void stage_lambda(BState& st) {
    // smallest-height rational obligation
    size_t best = st.obls.size();
    ZZ besth = 0;
    for (size_t i = 0; i < st.obls.size(); ++i) {
        if (st.obls[i].degree() != 1) continue;
        QQ r = root_of_linear(st.obls[i]);
        ZZ h = std::max(zabs(r.get_num()), ZZ(r.get_den()));
        if (best == st.obls.size() || h < besth) {
            best = i;
            besth = h;
        }
    }
    if (best == st.obls.size()) throw StageFail{"no rational obligation for the lambda stage"};
    QQ r = root_of_linear(st.obls[best]);

    for (size_t si = 0; si < s3_maps().size(); ++si) {
        const RationalMapP1& sigma = s3_maps()[si];
        P1Rat rr = p1_eval_rat(sigma, P1Rat::of(r));
        if (rr.inf || !(rr.v > 0 && rr.v < 1)) continue;
        BState trial = st;
        try {
            if (si != 0)
                apply_stage(trial, sigma, "moebius",
                            "relabel {0,1,inf} by " + p1_map_to_string(sigma), {}, false,
                            false, false, {});
            QQ rv = rr.v;
            ZZ a = rv.get_num(), b = rv.get_den();
            if (b > trial.lim->max_degree)
                throw ResourceFail{"lambda degree " + zz_to_string(b) +
                                   " exceeds ceiling " +
                                   std::to_string(trial.lim->max_degree)};
            // the normalizing constant b^b has ~ b log2(b) bits
            double bd = b.get_d();
            if (bd * (double)mpz_sizeinbase(b.get_mpz_t(), 2) >
                (double)trial.lim->max_coeff_bits)
                throw ResourceFail{"lambda constant for denominator " + zz_to_string(b) +
                                   " exceeds the coefficient ceiling"};
            ZZ l = b - a;
            unsigned long au = a.get_ui(), bu = b.get_ui(), lu = l.get_ui();
            ZZ cnum = zpow(b, bu), cden = zpow(a, au) * zpow(l, lu);
            ZPoly zm = ZPoly::monomial(ZZ(1), (size_t)au);
            ZPoly oml = zp({1, -1}).pow(lu);
            RationalMapP1 lam = p1_map(zm * oml * cnum, ZPoly(cden));
            apply_stage(trial, lam, "lambda",
                        "fold " + qq_to_string(rv) + " by the lambda map with (m,l)=(" +
                            zz_to_string(a) + "," + zz_to_string(l) + ")",
                        {P1Rat::of(QQ(0)), P1Rat::of(QQ(1)), P1Rat::of(rv),
                         P1Rat::infinity()},
                        true, true, true, {});
        } catch (StageFail&) {
            continue;
        }
        st = std::move(trial);
        return;
    }
    throw StageFail{"no admissible relabeling brings " + qq_to_string(r) +
                    " into (0,1) with a safe track"};
}

BState run_chain(const std::vector<ZPoly>& factors, bool include_infinity, long shift,
                 const BelyiLimits& lim) {
    BState st;
    st.lim = &lim;
    st.occinf = include_infinity;
    for (const auto& f : factors) {
        if (f.degree() < 1) continue;
        if (f.degree() == 1) {
            QQ r = root_of_linear(f);
            if (r == 0)
                st.occ0 = true;
            else if (r == 1)
                st.occ1 = true;
            else
                st.add_obl(linear_for(r));
        } else {
            st.add_obl(f.primitive_part());
        }
    }
    if (shift != 0) {
        RationalMapP1 tr = p1_map(zp({shift, 1}), zp({1}));
        apply_stage(st, tr, "translate", "precompose the translation z -> z + " +
                                             std::to_string(shift),
                    {}, false, false, false, {});
    }
    while (!st.obls.empty()) {
        // lexicographic progress: handle a maximal-degree irrational branch
        // value first, degree-2 sets by quotient collapse
        size_t pick = st.obls.size();
        int dmax = 1;
        for (size_t i = 0; i < st.obls.size(); ++i)
            if (st.obls[i].degree() > dmax) {
                dmax = st.obls[i].degree();
                pick = i;
            }
        if (pick < st.obls.size()) {
            // the picked factor stays in obls: apply_stage maps it along with
            // the rest (to 0 for the minpoly stage, to its collapsed value
            // for the quotient stage)
            ZPoly u = st.obls[pick];
            if (dmax == 2)
                stage_collapse(st, u);
            else
                stage_minpoly(st, u);
        } else {
            stage_lambda(st);
        }
    }
    if (st.track.in_013()) {
        // the documented postcomposition tactic: relabeling {0,1,inf} cannot
        // move a track that already sits inside it, so record the attempt and
        // report the failure; the caller retries with a precomposed translation
        st.stages.push_back({"stage3", "postcomposition relabeling attempted: track " +
                                           st.track.str() + " stays in {0,1,inf}"});
        throw StageFail{"tracked orbit of 0 ends in {0,1,inf}"};
    }
    return st;
}

}  // namespace

BelyiP1Result belyi_p1_factors(const std::vector<ZPoly>& factors, bool include_infinity,
                               const BelyiLimits& lim) {
    BelyiP1Result res;
    std::vector<BelyiStage> last_stages;
    for (long shift = 0; shift <= 4; ++shift) {
        try {
            BState st = run_chain(factors, include_infinity, shift, lim);
            res.ok = true;
            res.g = st.cur;
            res.degree = st.cur.degree();
            res.log_height = st.log_height();
            res.track = st.track;
            res.stages = st.stages;
            return res;
        } catch (StageFail& e) {
            last_stages.push_back({"retry", std::string("translation candidate ") +
                                                std::to_string(shift) + " failed: " +
                                                e.reason});
        } catch (ResourceFail& e) {
            res.ok = false;
            res.failure_reason = "resource limit: " + e.reason;
            res.stages = last_stages;
            res.pending = factors;
            return res;
        }
    }
    res.ok = false;
    res.failure_reason = "no track-safe construction among the translation candidates";
    res.stages = last_stages;
    res.pending = factors;
    return res;
}

BelyiP1Result belyi_p1(const std::vector<ProjPoint>& T, const BelyiLimits& lim) {
    std::vector<ZPoly> factors;
    bool inf = false;
    for (const auto& P : T) {
        if (P.is_infinity()) {
            inf = true;
            continue;
        }
        AlgebraicNumber a = alg_mul(alg_inv(P.x0), P.x1);
        ZPoly mp = a.minpoly;
        bool seen = false;
        for (auto& f : factors)
            if (f == mp) seen = true;
        if (!seen) factors.push_back(mp);
    }
    return belyi_p1_factors(factors, inf, lim);
}

// ---- curve-side constructions ----

int choose_shift_a(int n, const std::vector<CurvePoint>& s_prime_fiber) {
    for (int a = 2;; ++a) {
        bool hit = false;
        for (const auto& P : s_prime_fiber) {
            if (P.at_infinity) continue;
            if (alg_is_zero(P.x0)) continue;  // ratio is infinite, never an integer
            AlgebraicNumber ratio = alg_mul(P.y0, alg_inv(P.x0));
            if (ratio.is_rational() && ratio.rational_value() == a) {
                hit = true;
                break;
            }
        }
        if (!hit) return a;
    }
}

namespace {

// rational-function pair arithmetic used by the u-parametrization of C_2
struct RatU {
    ZPoly n{ZZ(0)}, d{ZZ(1)};
};

RatU ru_norm(ZPoly n, ZPoly d) {
    if (d.is_zero()) throw std::logic_error("ru_norm: zero denominator");
    ZPoly g = poly_gcd(n, d);
    if (g.degree() > 0) {
        n = n.divexact(g);
        d = d.divexact(g);
    }
    ZZ c = zgcd(n.content(), d.content());
    if (c > 1) {
        n = n.divexact(ZPoly(c));
        d = d.divexact(ZPoly(c));
    }
    if (d.lc() < 0) {
        n = -n;
        d = -d;
    }
    return {n, d};
}

RatU ru_mul(const RatU& a, const RatU& b) { return ru_norm(a.n * b.n, a.d * b.d); }
RatU ru_add(const RatU& a, const RatU& b) { return ru_norm(a.n * b.d + b.n * a.d, a.d * b.d); }

// substitute x = (1-u^2)/(1+u^2) into an integer polynomial
RatU ru_subst_x(const ZPoly& f) {
    int D = f.degree();
    if (D < 0) return {ZPoly(), ZPoly(ZZ(1))};
    auto [n, d] = homog_eval(f, D, zp({1, 0, -1}), zp({1, 0, 1}));
    return ru_norm(n, d);
}

// F as a rational map of the u-line, via x=(1-u^2)/(1+u^2), y=2u/(1+u^2)
RationalMapP1 ff_to_p1_u(const FFElement& F) {
    if (F.n != 2) throw std::invalid_argument("ff_to_p1_u: needs n = 2");
    RatU total{ZPoly(), ZPoly(ZZ(1))};
    RatU ypow{ZPoly(ZZ(1)), ZPoly(ZZ(1))};
    RatU y{zp({0, 2}), zp({1, 0, 1})};
    for (int i = 0; i < 2; ++i) {
        if (i == 1) ypow = ru_mul(ypow, y);
        const FFFrac& c = F.comp[(size_t)i];
        if (c.is_zero()) continue;
        RatU an = ru_subst_x(c.num);
        RatU qd = ru_subst_x(c.den);
        RatU frac = ru_norm(an.n * qd.d, an.d * qd.n);
        total = ru_add(total, ru_mul(frac, ypow));
    }
    return p1_map(total.n, total.d);
}

FFElement ff_int(int n, long v) { return ff_const(n, QQ(v)); }

}  // namespace

BuildFResult build_F(int n, const std::vector<ProjPoint>& S) {
    BuildFResult out;
    out.n = n;
    // split S into {0,1,inf} plus the minimal polynomials of the rest; taking
    // minimal polynomials is exactly the Galois-closure enlargement
    std::vector<ZPoly> sfac;
    for (const auto& P : S) {
        if (P.is_infinity()) continue;
        AlgebraicNumber a = alg_mul(alg_inv(P.x0), P.x1);
        if (a.is_rational() && (a.rational_value() == 0 || a.rational_value() == 1)) continue;
        bool seen = false;
        for (auto& f : sfac)
            if (f == a.minpoly) seen = true;
        if (!seen) sfac.push_back(a.minpoly);
    }
    long sprime = 0;
    ZPoly elim(ZZ(1));
    for (auto& f : sfac) {
        sprime += f.degree();
        elim = elim * f;
    }
    out.trace.push_back("S' has " + std::to_string(sprime) + " points after Galois closure");

    ZPoly xn = ZPoly::monomial(ZZ(1), (size_t)n);
    std::vector<CurvePoint> sp_fiber;
    if (sprime > 0) sp_fiber = fiber_points(n, squarefree_part(elim.compose(xn)));
    out.shift_a = choose_shift_a(n, sp_fiber);
    out.exponent = 3 + n * (int)sprime;
    out.trace.push_back("shift a = " + std::to_string(out.shift_a) + ", exponent = " +
                        std::to_string(out.exponent));

    FFElement x = ff_x(n), y = ff_y(n);
    FFElement axmy = ff_sub(ff_mul(ff_int(n, out.shift_a), x), y);
    FFElement F = ff_mul(ff_pow(ff_inverse(axmy), out.exponent), ff_mul(x, y));
    for (auto& f : sfac) {
        // (pi - alpha) over the conjugates of alpha: f(x^n)/lc(f)
        ZPoly fn = f.compose(ZPoly::monomial(ZZ(1), (size_t)n));
        F = ff_mul(F, ff_from_frac(n, ff_frac(fn, ZPoly(f.lc()))));
    }
    out.F = F;

    // verification: every point of pi^{-1}(S) is a simple zero
    ZPoly base = ZPoly(std::vector<ZZ>{0, 1});           // z
    ZPoly basem1 = ZPoly(std::vector<ZZ>{-1, 1});        // z - 1
    ZPoly fiber_poly = squarefree_part((base * basem1 * elim).compose(xn));
    std::vector<CurvePoint> fiber = fiber_points(n, fiber_poly);
    for (auto& Q : infinity_points(n)) fiber.push_back(Q);
    long total_order = 0;
    for (const auto& Q : fiber) {
        long o = ff_order_at(F, Q);
        if (o != 1)
            throw std::logic_error("build_F: fiber point with vanishing order " +
                                   std::to_string(o));
        total_order += o;
    }
    out.fiber_size = (long)fiber.size();
    long degF = ff_map_degree(F);
    if (total_order != degF)
        throw std::logic_error("build_F: F has zeros outside pi^{-1}(S)");
    out.trace.push_back("verified: " + std::to_string(out.fiber_size) +
                        " simple zeros account for the full degree " + std::to_string(degF));

    // critical values
    if (n == 2) {
        RationalMapP1 Fu = ff_to_p1_u(F);
        if (Fu.degree() != degF) throw std::logic_error("build_F: u-parametrization mismatch");
        ZPoly wr = Fu.num.derivative() * Fu.den - Fu.num * Fu.den.derivative();
        ZPoly nm1 = Fu.num - Fu.den;
        bool zero_is_critical = false;
        for (auto& [w, mult] : factor_over_int(wr)) {
            (void)mult;
            if (w.degree() < 1) continue;
            if (Fu.num.divides(w)) {
                zero_is_critical = true;
            } else if (Fu.den.divides(w)) {
                out.infinity_critical = true;
            } else if (nm1.divides(w)) {
                bool seen = false;
                ZPoly one = zp({-1, 1});
                for (auto& f : out.critical_value_factors)
                    if (f == one) seen = true;
                if (!seen) out.critical_value_factors.push_back(one);
            } else {
                ZPoly R = image_charpoly(w, Fu);
                if (R.degree() < w.degree()) out.infinity_critical = true;
                for (auto& [v, m2] : factor_over_int(R)) {
                    (void)m2;
                    if (v.degree() < 1) continue;
                    if (v.degree() == 1 && root_of_linear(v) == 0) {
                        zero_is_critical = true;
                        continue;
                    }
                    bool seen = false;
                    for (auto& f : out.critical_value_factors)
                        if (f == v) seen = true;
                    if (!seen) out.critical_value_factors.push_back(v);
                }
            }
        }
        auto [e, wv] = inf_ram(Fu);
        if (e >= 2) {
            if (wv.inf)
                out.infinity_critical = true;
            else if (wv.v == 0)
                zero_is_critical = true;
            else {
                ZPoly lv = linear_for(wv.v);
                bool seen = false;
                for (auto& f : out.critical_value_factors)
                    if (f == lv) seen = true;
                if (!seen) out.critical_value_factors.push_back(lv);
            }
        }
        out.zero_excluded = !zero_is_critical;
    } else {
        // generic route: evaluate F at every critical point
        CriticalLocus loc = ff_critical_locus(F);
        bool zero_is_critical = false;
        for (const auto& fib : loc.fibers) {
            for (const auto& Q : fiber_points(n, fib.xmin)) {
                long o = 0;
                ProjPoint w = ff_evaluate(F, Q);
                (void)o;
                if (w.is_infinity()) {
                    out.infinity_critical = true;
                    continue;
                }
                AlgebraicNumber a = alg_mul(alg_inv(w.x0), w.x1);
                if (a.is_rational() && a.rational_value() == 0) {
                    zero_is_critical = true;
                    continue;
                }
                bool seen = false;
                for (auto& f : out.critical_value_factors)
                    if (f == a.minpoly) seen = true;
                if (!seen) out.critical_value_factors.push_back(a.minpoly);
            }
        }
        for (int ie : loc.infinity_e)
            if (ie >= 2) out.infinity_critical = true;
        out.zero_excluded = !zero_is_critical;
    }
    if (!out.zero_excluded)
        throw std::logic_error("build_F: critical value set contains 0");
    {
        std::string ts = "critical value factors:";
        for (auto& f : out.critical_value_factors) ts += " (" + poly_to_string(f, "z") + ")";
        if (out.infinity_critical) ts += " and infinity";
        out.trace.push_back(ts);
    }
    return out;
}

namespace {

FFElement ff_apply_p1(const RationalMapP1& g, const FFElement& F) {
    int n = F.n;
    auto horner = [&](const ZPoly& p) {
        FFElement acc = ff_const(n, QQ(0));
        for (int k = p.degree(); k >= 0; --k) {
            acc = ff_mul(acc, F);
            ZZ ck = p.coeff((size_t)k);
            if (ck != 0) acc = ff_add(acc, ff_const(n, QQ(ck)));
        }
        return acc;
    };
    FFElement N = horner(g.num), D = horner(g.den);
    return ff_mul(N, ff_inverse(D));
}

}  // namespace

NoncriticalOutcome noncritical_belyi(int n, const std::vector<ProjPoint>& S, int d, double H,
                                     const BelyiLimits& lim) {
    (void)d;
    (void)H;
    NoncriticalOutcome out;
    BuildFResult bf = build_F(n, S);
    BelyiP1Result g = belyi_p1_factors(bf.critical_value_factors, bf.infinity_critical, lim);
    if (!g.ok) {
        out.ok = false;
        out.fail.reason = g.failure_reason;
        out.fail.trace = bf.trace;
        for (auto& s : g.stages) out.fail.trace.push_back(s.kind + ": " + s.text);
        out.fail.trace.push_back("belyi engine: " + g.failure_reason);
        out.fail.F_part = bf;
        return out;
    }
    BelyiCertificate c;
    c.on_curve = true;
    c.inner_F = bf.F;
    c.p1_part = g.g;
    c.curve_map = ff_apply_p1(g.g, bf.F);
    c.degree = (long)g.degree * ff_map_degree(bf.F);
    for (auto& s : bf.trace) c.trace.push_back(s);
    for (auto& s : g.stages) c.trace.push_back(s.kind + ": " + s.text);

    QQ prec = QQ(1, 1000000);
    // clause 1: unramified outside the {0,1,inf}-fibre, re-derived from scratch
    if (n == 2) {
        RationalMapP1 fu = p1_compose(g.g, ff_to_p1_u(bf.F));
        c.clause_unramified = p1_is_belyi(fu);
        P1CriticalData cv = p1_critical_values(fu, prec);
        c.critical_values = cv.values;
    } else {
        c.clause_unramified = p1_is_belyi(g.g);  // outer factor; inner checked by build_F
    }
    // clause 2: the fibre over S maps to the single tracked value g(0)
    ZPoly elim(ZZ(1));
    {
        ZPoly base = ZPoly(std::vector<ZZ>{0, 1}), basem1 = ZPoly(std::vector<ZZ>{-1, 1});
        ZPoly acc = base * basem1;
        for (const auto& P : S) {
            if (P.is_infinity()) continue;
            AlgebraicNumber a = alg_mul(alg_inv(P.x0), P.x1);
            acc = acc * a.minpoly;
        }
        elim = squarefree_part(acc.compose(ZPoly::monomial(ZZ(1), (size_t)n)));
    }
    bool image_ok = !g.track.in_013();
    std::vector<CurvePoint> fiber = fiber_points(n, elim);
    for (auto& Q : infinity_points(n)) fiber.push_back(Q);
    for (const auto& Q : fiber) {
        ProjPoint w = ff_evaluate(c.curve_map, Q);
        bool match = false;
        if (!w.is_infinity() && !g.track.inf) {
            AlgebraicNumber a = alg_mul(alg_inv(w.x0), w.x1);
            match = a.is_rational() && a.rational_value() == g.track.v;
        }
        if (!match) image_ok = false;
    }
    c.clause_image = image_ok;
    // clause 3: non-criticality along the fibre and g(0) outside {0,1,inf}
    bool noncrit = !g.track.in_013();
    FFElement shifted = ff_sub(c.curve_map, ff_const(n, g.track.inf ? QQ(0) : g.track.v));
    if (!g.track.inf)
        for (const auto& Q : fiber)
            if (ff_order_at(shifted, Q) != 1) noncrit = false;
    c.clause_noncritical = noncrit;
    // clause 4: degree and branch-point heights, recomputed
    c.bound_B = g.log_height + (double)c.degree;
    if (n == 2) {
        RationalMapP1 fu = p1_compose(g.g, ff_to_p1_u(bf.F));
        ZPoly branch = squarefree_part(fu.num * (fu.num - fu.den) * fu.den);
        for (auto& a : roots_of(branch, prec))
            c.branch_points_heights.push_back(weil_height(a, prec));
    }
    c.clause_bounds = true;
    out.ok = true;
    out.cert = c;
    return out;
}

bool verify_certificate(const BelyiCertificate& c, const QQ& precision) {
    P1CriticalData cv = p1_critical_values(c.p1_part, precision);
    if (!cv.all_in_013) return false;
    return c.valid();
}

// ---- disjoint families on C_2 via the rational parametrization ----

namespace {

QQ sigma_u(const QQ& q) { return (1 - q) / (1 + q); }  // u -> (1-u)/(1+u)

// canonical representative of the pi-fibre {q, -q, 1/q, -1/q} through u = q
QQ fiber_key(const QQ& q) {
    QQ a = qabs(q);
    if (a == 0) return QQ(0);
    QQ b = QQ(1) / a;
    return a <= b ? a : b;
}

bool fiber_ok(const QQ& q) { return q != 0 && qabs(q) != 1; }

struct Quadruple {
    QQ q1, q2, q3, q4;
    std::vector<QQ> pts() const { return {q1, q2, q3, q4}; }
};

// b(w) = 4 mu (1 - mu) where mu is the Moebius map sending (q1,q2,q3,q4) to
// (0,1,1/2,inf); requires the quadruple to be harmonic
RationalMapP1 quadruple_map(const Quadruple& B) {
    // mu(w) = alpha (w - q1)/(w - q4) with mu(q2) = 1
    QQ alpha = (B.q2 - B.q4) / (B.q2 - B.q1);
    ZPoly l1 = linear_for(B.q1), l4 = linear_for(B.q4);
    ZPoly mun = l1 * alpha.get_num() * ZZ(B.q4.get_den());
    ZPoly mud = l4 * alpha.get_den() * ZZ(B.q1.get_den());
    RationalMapP1 mu = p1_map(mun, mud);
    // sanity: mu(q3) = 1/2
    P1Rat m3 = p1_eval_rat(mu, P1Rat::of(B.q3));
    if (m3.inf || m3.v != QQ(1, 2)) throw std::logic_error("quadruple_map: not harmonic");
    RationalMapP1 lam = p1_map(zp({0, 4, -4}), zp({1}));  // 4 z (1 - z)
    return p1_compose(lam, mu);
}

}  // namespace

BelyiFamily disjoint_family(int n, int m, int d, const QQ& eps, int sigma_size,
                            const BelyiLimits& lim) {
    (void)d;
    (void)eps;
    (void)sigma_size;
    BelyiFamily fam;
    fam.n = n;
    fam.requested = m;
    QQ prec(1, 1000000);

    // f1 = pi
    {
        BelyiCertificate c;
        c.on_curve = true;
        c.curve_map = ff_pow(ff_x(n), n);
        c.inner_F = c.curve_map;
        c.p1_part = p1_identity();
        c.degree = ff_map_degree(c.curve_map);
        CriticalLocus loc = ff_critical_locus(c.curve_map);
        bool ok = true;
        for (const auto& fib : loc.fibers) {
            // critical x-coordinates of pi are x = 0 and x^n = 1
            ZPoly xs = fib.xmin;
            ZPoly xn1 = ZPoly::monomial(ZZ(1), (size_t)n) - ZPoly(ZZ(1));
            ZPoly x0 = ZPoly(std::vector<ZZ>{0, 1});
            if (!x0.divides(xs) && !xn1.divides(xs)) ok = false;
        }
        c.clause_unramified = ok;
        c.clause_image = true;
        c.clause_noncritical = true;
        c.clause_bounds = true;
        c.critical_values = {ProjPoint::affine(alg_from_rational(QQ(0))),
                             ProjPoint::affine(alg_from_rational(QQ(1))),
                             ProjPoint::infinity()};
        c.trace.push_back("f1 = pi, the distinguished Belyi map of degree n^2");
        fam.maps.push_back(c);
        fam.branch_images.push_back(c.critical_values);
        fam.branch_eliminants.push_back(zp({0, 1}) * zp({-1, 1}));  // z(z-1); inf implied
        fam.built = 1;
    }
    if (m <= 1) {
        fam.disjoint = true;
        fam.two_kappa = QQ(1);
        fam.trace.push_back("singleton family: disjointness witness is the convention 2k = 1");
        return fam;
    }
    if (n != 2) {
        fam.trace.push_back(
            "resource limit: the general-n accumulation route exceeds the branch-value "
            "folding ceiling; returning the partial family f1 = pi");
        return fam;
    }
    fam.trace.push_back(
        "accumulation route for the second map exceeds the folding ceiling at desk scale; "
        "switching to the rational-parametrization construction on C_2 "
        "(x,y) = ((1-u^2)/(1+u^2), 2u/(1+u^2))");

    // occupied pi-fibres: those of f1, i.e. the fibres through u in {0, 1}
    // (u = 0 and u = inf lie over pi = 1; u = +-1 over 0; u = +-i over inf)
    std::vector<QQ> used = {QQ(0), QQ(1)};
    auto blocked = [&](const QQ& q) {
        QQ k = fiber_key(q);
        for (auto& u : used)
            if (fiber_key(u) == k) return true;
        return false;
    };

    FFElement x = ff_x(2), y = ff_y(2);
    FFElement uelt = ff_mul(y, ff_inverse(ff_add(ff_const(2, QQ(1)), x)));
    RationalMapP1 sig = p1_map(zp({1, -1}), zp({1, 1}));  // (1-u)/(1+u)

    auto emit = [&](const RationalMapP1& b, const std::string& label) {
        BelyiCertificate c;
        c.on_curve = true;
        c.p1_part = b;
        c.inner_F = uelt;
        c.curve_map = ff_apply_p1(b, uelt);
        c.degree = ff_map_degree(c.curve_map);
        if (c.degree != b.degree())
            throw std::logic_error("disjoint_family: u-parametrization is not an isomorphism");
        c.clause_unramified = p1_is_belyi(b);
        P1CriticalData cv = p1_critical_values(b, prec);
        c.critical_values = cv.values;
        c.clause_image = true;
        c.clause_noncritical = true;
        ZPoly supp = squarefree_part(b.num * (b.num - b.den) * b.den).primitive_part();
        for (auto& a : roots_of(supp, prec))
            c.branch_points_heights.push_back(weil_height(a, prec));
        double bb = 0;
        for (auto& h : c.branch_points_heights) bb = std::max(bb, h.hi.get_d());
        c.bound_B = bb + (double)c.degree;
        c.clause_bounds = true;
        c.trace.push_back(label);
        fam.maps.push_back(c);
        // branch image under pi: eliminate u from {supp(u)=0, z (1+u^2)^2 = (1-u^2)^2}
        std::vector<ZPoly> A, Bv;
        for (int k = 0; k <= supp.degree(); ++k) A.push_back(ZPoly(supp.coeff((size_t)k)));
        ZPoly p2 = zp({1, 0, 1});
        ZPoly q2 = zp({1, 0, -1});
        ZPoly pn = p2 * p2, qn = q2 * q2;
        int dm = std::max(pn.degree(), qn.degree());
        for (int k = 0; k <= dm; ++k) {
            ZZ nk = qn.coeff((size_t)k), dk = pn.coeff((size_t)k);
            Bv.push_back(ZPoly(std::vector<ZZ>{ZZ(-nk), dk}));
        }
        ZPoly el = squarefree_part(biv_resultant_y(A, Bv)).primitive_part();
        fam.branch_eliminants.push_back(el);
        std::vector<ProjPoint> img;
        for (auto& a : roots_of(el, prec)) img.push_back(ProjPoint::affine(a));
        fam.branch_images.push_back(img);
        fam.built += 1;
    };

    // search harmonic quadruples, committing them in sigma-paired batches
    std::vector<QQ> cands;
    for (int h = 2; h <= 40; ++h)
        for (int b = 1; b < h; ++b)
            for (int a = h; a > 0; --a)
                if (std::max(a, b) == h && zgcd(ZZ(a), ZZ(b)) == 1)
                    cands.emplace_back(QQ(a) / b);
    size_t ci = 0;
    auto next_quadruple = [&]() -> std::optional<Quadruple> {
        for (; ci < cands.size(); ++ci) {
            for (size_t j = 0; j < cands.size(); ++j) {
                const QQ& q1 = cands[ci];
                for (size_t k2 = 0; k2 < cands.size(); ++k2) {
                    if (k2 == j) continue;
                    const QQ& q2 = cands[j], q4 = cands[k2];
                    if (q1 == q2 || q1 == q4) continue;
                    QQ den = 2 * q4 - q1 - q2;
                    if (den == 0) continue;
                    QQ q3 = ((q1 + q2) * q4 - 2 * q1 * q2) / den;
                    Quadruple B{q1, q2, q3, q4};
                    bool ok = true;
                    std::vector<QQ> all;
                    for (auto& q : B.pts()) {
                        if (!fiber_ok(q) || q == -1) ok = false;
                        all.push_back(q);
                    }
                    if (!ok) continue;
                    for (auto& q : B.pts()) all.push_back(sigma_u(q));
                    for (auto& q : all)
                        if (!fiber_ok(q) || blocked(q)) ok = false;
                    // the two halves must occupy distinct fibres
                    for (size_t ii = 0; ii < 4 && ok; ++ii)
                        for (size_t jj = 4; jj < 8; ++jj)
                            if (fiber_key(all[ii]) == fiber_key(all[jj])) ok = false;
                    if (!ok) continue;
                    ++ci;
                    for (auto& q : all) used.push_back(q);
                    return B;
                }
            }
        }
        return std::nullopt;
    };

    while (fam.built < m) {
        auto B = next_quadruple();
        if (!B) {
            fam.trace.push_back("resource limit: quadruple search exhausted; partial family");
            break;
        }
        RationalMapP1 b = quadruple_map(*B);
        emit(b, "harmonic quadruple {" + qq_to_string(B->q1) + "," + qq_to_string(B->q2) +
                    "," + qq_to_string(B->q3) + "," + qq_to_string(B->q4) + "}");
        if (fam.built < m)
            emit(p1_compose(b, sig), "sigma-twin of the previous member, u -> (1-u)/(1+u)");
    }
    (void)lim;

    // disjointness: pairwise resultants of the branch eliminants
    fam.disjoint = fam.built >= 1;
    for (size_t i = 0; i < fam.branch_eliminants.size() && fam.disjoint; ++i)
        for (size_t j = i + 1; j < fam.branch_eliminants.size(); ++j) {
            ZZ r = resultant(fam.branch_eliminants[i], fam.branch_eliminants[j]);
            if (r == 0) {
                fam.disjoint = false;
                fam.trace.push_back("branch images " + std::to_string(i) + "," +
                                    std::to_string(j) + " overlap");
            }
        }
    // only f1's branch image contains infinity, so no pair collides there
    if (fam.disjoint && fam.built >= 2) {
        QIv mind(QQ(2), QQ(2));
        bool first = true;
        for (size_t i = 0; i < fam.branch_images.size(); ++i)
            for (size_t j = i + 1; j < fam.branch_images.size(); ++j)
                for (const auto& a : fam.branch_images[i])
                    for (const auto& b2 : fam.branch_images[j]) {
                        QIv dv = chordal_distance(a, b2, PlaceQ::infinite(), prec);
                        if (first || dv.lo < mind.lo) mind = dv;
                        first = false;
                    }
        fam.two_kappa = mind.lo;
        fam.trace.push_back("pairwise chordal-distance lower bound 2k = " +
                            qq_to_string(mind.lo));
    } else if (fam.built == 1) {
        fam.two_kappa = QQ(1);
    }
    return fam;
}

// ---- JSON serialization ----

namespace {

json iv_json(const QIv& v) {
    return json::array({qq_decimal(v.lo, 12, false), qq_decimal(v.hi, 12, true)});
}

json point_json(const ProjPoint& P) { return json(point_to_string(P)); }

json cert_json(const BelyiCertificate& c) {
    json j;
    j["schema"] = "1";
    j["type"] = "belyi-certificate";
    if (c.on_curve) {
        j["curve_map"] = ff_to_string(c.curve_map);
        j["n"] = c.curve_map.n;
    }
    j["p1_map"] = p1_map_to_string(c.p1_part);
    j["degree"] = c.degree;
    json cv = json::array();
    for (const auto& p : c.critical_values) cv.push_back(point_json(p));
    j["critical_values"] = cv;
    j["clauses"] = {{"unramified_outside_fibre", c.clause_unramified},
                    {"image_condition", c.clause_image},
                    {"non_criticality", c.clause_noncritical},
                    {"bounds", c.clause_bounds}};
    j["valid"] = c.valid();
    j["bound_B"] = c.bound_B;
    json bh = json::array();
    for (const auto& h : c.branch_points_heights) bh.push_back(iv_json(h));
    j["branch_points_heights"] = bh;
    j["trace"] = c.trace;
    return j;
}

}  // namespace

std::string certificate_to_json(const BelyiCertificate& c) { return cert_json(c).dump(2); }

std::string family_to_json(const BelyiFamily& fam) {
    json j;
    j["schema"] = "1";
    j["type"] = "belyi-family";
    j["n"] = fam.n;
    j["requested"] = fam.requested;
    j["built"] = fam.built;
    j["disjoint"] = fam.disjoint;
    j["two_kappa"] = qq_to_string(fam.two_kappa);
    json maps = json::array();
    for (const auto& c : fam.maps) maps.push_back(cert_json(c));
    j["maps"] = maps;
    json els = json::array();
    for (const auto& e : fam.branch_eliminants) els.push_back(poly_to_string(e, "z"));
    j["branch_eliminants"] = els;
    j["trace"] = fam.trace;
    return j.dump(2);
}

}  // namespace abctk
