#include "abctk/alg.hpp"

#include <algorithm>
#include <stdexcept>

namespace abctk {

std::vector<std::pair<QQ, int>> newton_slopes(const ZPoly& f, const ZZ& p) {
    int d = f.degree();
    // Newton polygon: lower convex hull of (i, v_p(f_i))
    std::vector<std::pair<QQ, QQ>> pts;
    for (int i = 0; i <= d; ++i)
        if (f.coeff((size_t)i) != 0) pts.push_back({QQ(i), QQ(zval(f.coeff((size_t)i), p))});
    std::vector<std::pair<QQ, QQ>> hull;
    for (auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& o = hull[hull.size() - 2];
            auto& m = hull[hull.size() - 1];
            QQ cross = (m.first - o.first) * (pt.second - o.second) -
                       (m.second - o.second) * (pt.first - o.first);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    std::vector<std::pair<QQ, int>> entries;
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        QQ run = hull[i + 1].first - hull[i].first;
        QQ slope = (hull[i + 1].second - hull[i].second) / run;
        entries.push_back({-slope, (int)run.get_num().get_si()});
    }
    std::sort(entries.begin(), entries.end(), [](auto& x, auto& y) { return x.first < y.first; });
    return entries;
}

ValuationProfile valuation_profile(const AlgebraicNumber& a, const ZZ& p) {
    if (alg_is_zero(a)) throw std::domain_error("valuation_profile: zero");
    if (!is_prime(p)) throw std::invalid_argument("valuation_profile: p not prime");
    return {p, newton_slopes(a.minpoly, p)};
}

QIv weil_height(const AlgebraicNumber& a, const QQ& precision) {
    if (a.is_rational()) {
        QQ v = a.rational_value();
        ZZ m = std::max(zabs(v.get_num()), ZZ(v.get_den()));
        if (m == 1) return QIv(QQ(0));
        for (unsigned bits = 64;; bits *= 2) {
            QIv h = log_enclosure(QQ(m), bits);
            if (h.width() <= precision) return h;
        }
    }
    int d = a.degree();
    unsigned bits = 64;
    QQ eps = precision / (4 * d);
    for (int attempt = 0; attempt < 24; ++attempt, bits *= 2, eps = eps / 16) {
        std::vector<AlgebraicNumber> conj = roots_of(a.minpoly, eps);
        QIv sum(QQ(0));
        ZZ lc = zabs(a.minpoly.lc());
        if (lc > 1) sum = log_enclosure(QQ(lc), bits);
        for (auto& r : conj) {
            QIv n2 = r.box.norm2();
            if (n2.hi <= 1) continue;  // log+ vanishes
            if (n2.lo >= 1)
                sum = sum + log_enclosure(n2, bits) * QQ(1, 2);
            else  // box straddles the unit circle
                sum = sum + QIv(QQ(0), log_enclosure(n2.hi, bits).hi * QQ(1, 2));
        }
        QIv h = sum * QQ(1, d);
        if (h.lo < 0) h.lo = 0;
        if (h.width() <= precision) return h;
    }
    throw std::logic_error("weil_height: failed to converge");
}

QIv log_abs_range(const AlgebraicNumber& a, const PlaceQ& v, unsigned prec_bits) {
    if (alg_is_zero(a)) throw std::domain_error("log_abs_range: zero");
    if (v.finite) {
        ValuationProfile pr = valuation_profile(a, v.p);
        QIv logp = log_enclosure(QQ(v.p), prec_bits);
        QIv out;
        bool first = true;
        for (auto& [val, cnt] : pr.entries) {
            (void)cnt;
            QIv term = logp * (-val);
            out = first ? term : QIv::hull(out, term);
            first = false;
        }
        return out;
    }
    QQ eps = qpow(QQ(1, 2), (long)(prec_bits / 2) + 4);
    for (int attempt = 0; attempt < 24; ++attempt, eps = eps / 16) {
        std::vector<AlgebraicNumber> conj = roots_of(a.minpoly, eps);
        QIv out;
        bool first = true, ok = true;
        for (auto& r : conj) {
            QIv n2 = r.box.norm2();
            if (n2.lo <= 0) { ok = false; break; }  // box still touches 0
            QIv lg = log_enclosure(n2, prec_bits) * QQ(1, 2);
            out = first ? lg : QIv::hull(out, lg);
            first = false;
        }
        if (ok) return out;
    }
    throw std::logic_error("log_abs_range: roots would not separate from zero");
}

// ---- projective points ----

ProjPoint ProjPoint::affine(AlgebraicNumber alpha) {
    return {alg_from_rational(QQ(1)), std::move(alpha)};
}

ProjPoint ProjPoint::infinity() {
    return {alg_from_rational(QQ(0)), alg_from_rational(QQ(1))};
}

namespace {

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// decimal ("1.41", "-2"), or fraction via parse_rational
std::optional<QQ> parse_number(const std::string& in) {
    std::string s = strip(in);
    if (!s.empty() && s[0] == '+') s = strip(s.substr(1));
    size_t dot = s.find('.');
    if (dot == std::string::npos) return parse_rational(s);
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg || (!ip.empty() && ip[0] == '+')) ip = ip.substr(1);
    if (fp.empty() || fp.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
    if (!ip.empty() && ip.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
    ZZ num(ip.empty() ? std::string("0") : ip);
    ZZ scale = zpow(ZZ(10), (unsigned long)fp.size());
    num = num * scale + ZZ(fp);
    QQ v(num, scale);
    v.canonicalize();
    return neg ? QQ(-v) : v;
}

// "1.41", "-0.5+1.2i", "2i", ...
std::optional<std::pair<QQ, QQ>> parse_complex(const std::string& in) {
    std::string s = strip(in);
    if (s.empty()) return std::nullopt;
    if (s.back() == 'i') {
        // find the split sign separating real and imaginary parts
        for (size_t k = s.size() - 1; k > 0; --k) {
            if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && k != 0) {
                auto re = parse_number(s.substr(0, k));
                std::string imtxt = s.substr(k, s.size() - 1 - k);
                if (imtxt == "+" || imtxt == "-") imtxt += "1";
                auto im = parse_number(imtxt);
                if (re && im) return std::make_pair(*re, *im);
                break;
            }
        }
        std::string imtxt = s.substr(0, s.size() - 1);
        if (imtxt.empty()) imtxt = "1";
        auto im = parse_number(imtxt);
        if (!im) return std::nullopt;
        return std::make_pair(QQ(0), *im);
    }
    auto re = parse_number(s);
    if (!re) return std::nullopt;
    return std::make_pair(*re, QQ(0));
}

AlgebraicNumber parse_coordinate(const std::string& in) {
    std::string s = strip(in);
    if (s.rfind("root(", 0) == 0) {
        if (s.back() != ')') throw std::invalid_argument("point: unterminated root(...)");
        std::string inner = s.substr(5, s.size() - 6);
        size_t comma = inner.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("point: root(...) needs 'near' hint");
        auto poly = parse_poly(strip(inner.substr(0, comma)));
        if (!poly) throw std::invalid_argument("point: bad polynomial in root(...)");
        std::string hint = strip(inner.substr(comma + 1));
        if (hint.rfind("near", 0) != 0)
            throw std::invalid_argument("point: expected 'near' in root(...)");
        auto z = parse_complex(hint.substr(4));
        if (!z) throw std::invalid_argument("point: bad numeric hint in root(...)");
        auto roots = roots_of(*poly, QQ(1, 1 << 20));
        if (roots.empty()) throw std::invalid_argument("point: constant polynomial in root(...)");
        size_t best = 0;
        QQ bestd(-1);
        for (size_t i = 0; i < roots.size(); ++i) {
            QQ dr = roots[i].box.re.mid() - z->first;
            QQ di = roots[i].box.im.mid() - z->second;
            QQ d2 = dr * dr + di * di;
            if (bestd < 0 || d2 < bestd) { bestd = d2; best = i; }
        }
        return roots[best];
    }
    auto v = parse_number(s);
    if (!v) throw std::invalid_argument("point: bad coordinate '" + s + "'");
    return alg_from_rational(*v);
}

}  // namespace

std::string coordinate_to_string(const AlgebraicNumber& a) {
    if (a.is_rational()) return qq_to_string(a.rational_value());
    std::string near = qq_decimal(a.box.re.mid(), 6, false);
    QQ imm = a.box.im.mid();
    if (imm != 0)
        near += (imm > 0 ? "+" : "-") + qq_decimal(qabs(imm), 6, false) + "i";
    return "root(" + poly_to_string(a.minpoly) + ", near " + near + ")";
}

ProjPoint parse_point(const std::string& in) {
    std::string s = strip(in);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("point: expected [a:b]");
    std::string inner = s.substr(1, s.size() - 2);
    int depth = 0;
    size_t colon = std::string::npos;
    for (size_t i = 0; i < inner.size(); ++i) {
        if (inner[i] == '(') ++depth;
        else if (inner[i] == ')') --depth;
        else if (inner[i] == ':' && depth == 0) { colon = i; break; }
    }
    if (colon == std::string::npos) throw std::invalid_argument("point: expected [a:b]");
    AlgebraicNumber x0 = parse_coordinate(inner.substr(0, colon));
    AlgebraicNumber x1 = parse_coordinate(inner.substr(colon + 1));
    if (alg_is_zero(x0)) {
        if (alg_is_zero(x1)) throw std::invalid_argument("point: [0:0] is not projective");
        return ProjPoint::infinity();
    }
    if (alg_is_one(x0)) return ProjPoint::affine(std::move(x1));
    return ProjPoint::affine(alg_mul(x1, alg_inv(x0)));
}

std::string point_to_string(const ProjPoint& P) {
    return "[" + coordinate_to_string(P.x0) + ":" + coordinate_to_string(P.x1) + "]";
}

QIv chordal_distance(const ProjPoint& P1, const ProjPoint& P2, const PlaceQ& v,
                     const QQ& precision) {
    bool inf1 = P1.is_infinity(), inf2 = P2.is_infinity();
    if (inf1 && inf2) return QIv(QQ(0));
    // cross term D = x0·y1 − x1·y0 for canonical representatives
    AlgebraicNumber D = alg_from_rational(QQ(1));
    if (!inf1 && !inf2) {
        if (alg_equal(P1.x1, P2.x1)) return QIv(QQ(0));
        D = alg_sub(P2.x1, P1.x1);
    }
    if (v.finite) {
        auto logmax = [&](const ProjPoint& P, unsigned bits) {
            // one coordinate is 1, so max(|x0|, |x1|) ≥ 1 and a zero coordinate drops out
            if (P.is_infinity() || alg_is_zero(P.x1)) return QIv(QQ(0));
            return iv_max(QIv(QQ(0)), log_abs_range(P.x1, v, bits));
        };
        QIv best;
        for (unsigned bits = 64; bits <= 1u << 16; bits *= 2) {
            QIv logd = log_abs_range(D, v, bits) - logmax(P1, bits) - logmax(P2, bits);
            QIv delta{exp_enclosure(logd.lo, bits).lo, exp_enclosure(logd.hi, bits).hi};
            delta = QIv::intersect(delta, QIv(QQ(0), QQ(1)));
            best = delta;
            if (delta.width() <= precision) return delta;
        }
        return best;  // residual width from unresolved conjugate clusters
    }
    AlgebraicNumber a1 = P1.x1, a2 = P2.x1, d = D;
    unsigned bits = 64;
    QQ eps = std::min(precision, QQ(1, 16));
    for (int attempt = 0; attempt < 24; ++attempt, bits += 64, eps = eps / 16) {
        d = alg_refine(d, eps);
        auto den = [&](const ProjPoint& P, AlgebraicNumber& x) {
            if (P.is_infinity()) return QIv(QQ(1));
            x = alg_refine(x, eps);
            return iv_max(QIv(QQ(1)), sqrt_enclosure(x.box.norm2(), bits));
        };
        QIv d1 = den(P1, a1), d2 = den(P2, a2);
        QIv num = sqrt_enclosure(d.box.norm2(), bits);
        QIv delta = num * d1.inv() * d2.inv();
        // the max-norm quotient can exceed 1 archimedeanly; the distance caps at 1
        delta = iv_min(delta, QIv(QQ(1)));
        if (delta.lo < 0) delta.lo = 0;
        if (delta.width() <= precision) return delta;
    }
    throw std::logic_error("chordal_distance: failed to converge");
}

}  // namespace abctk
