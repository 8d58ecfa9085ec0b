// Command-line front end: every toolkit operation with deterministic JSON
// output.  Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 resource limit.
#include <CLI11.hpp>
#include <json.hpp>

#include "abctk/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace abctk;
using nlohmann::json;

namespace {

QQ parse_qq(const std::string& s) {
    mpq_class t(s);
    t.canonicalize();
    return t;
}

std::vector<PlaceQ> parse_places(const std::string& s) {
    std::vector<PlaceQ> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok == "inf" || tok == "oo" || tok == "infinity")
            out.push_back(PlaceQ::infinite());
        else
            out.push_back(PlaceQ::prime(ZZ(tok.c_str())));
    }
    if (out.empty()) throw CLI::ValidationError("--places", "no place recognized");
    return out;
}

json iv_json(const QIv& v, int digits) {
    return json::array({qq_decimal(v.lo, digits, false), qq_decimal(v.hi, digits, true)});
}

json zz_list(const std::vector<ZZ>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(p.get_str());
    return a;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_height(const std::string& point, const QQ& prec, int digits) {
    ProjPoint P = parse_point(point);
    QIv h = height_point(P, prec);
    json j;
    j["schema"] = "1";
    j["type"] = "height";
    j["point"] = point_to_string(P);
    j["value"] = iv_json(h, digits);
    if (!P.is_infinity() && P.x0.is_rational() && P.x1.is_rational()) {
        QQ v = P.x1.rational_value() / P.x0.rational_value();
        ZZ m = std::max(zabs(v.get_num()), zabs(v.get_den()));
        j["exact_form"] = "log " + m.get_str();
    }
    emit(j);
    return 0;
}

int cmd_conductor(const std::string& point) {
    ConductorResult c = conductor(parse_point(point));
    json j;
    j["schema"] = "1";
    j["type"] = "conductor";
    j["value"] = iv_json(c.value, 9);
    j["exact"] = c.exact;
    j["regular_primes"] = zz_list(c.regular_primes);
    j["irregular_primes"] = zz_list(c.irregular_primes);
    emit(j);
    return 0;
}

int cmd_rootdisc(const std::string& point) {
    RootDiscResult r = log_root_disc(parse_point(point));
    json j;
    j["schema"] = "1";
    j["type"] = "root-discriminant";
    j["value"] = iv_json(r.value, 9);
    j["exact"] = r.exact;
    j["field_degree"] = r.field_degree;
    emit(j);
    return 0;
}

int cmd_compactset(const std::string& point, const std::string& places, const QQ& eta) {
    bool member = in_compact_set(parse_point(point), parse_places(places), eta);
    json j;
    j["schema"] = "1";
    j["type"] = "compact-set";
    j["eta"] = qq_to_string(eta);
    j["member"] = member;
    emit(j);
    return 0;
}

int cmd_belyi(int n, const std::string& points, const QQ& prec) {
    std::vector<ProjPoint> S;
    std::stringstream ss(points);
    std::string tok;
    while (std::getline(ss, tok, ';'))
        if (!tok.empty()) S.push_back(parse_point(tok));
    NoncriticalOutcome out = noncritical_belyi(n, S, 1, 4.0);
    if (out.ok) {
        if (!verify_certificate(out.cert, prec)) {
            json j;
            j["schema"] = "1";
            j["type"] = "belyi-certificate";
            j["ok"] = false;
            j["reason"] = "certificate failed independent re-verification";
            emit(j);
            return 2;
        }
        std::cout << certificate_to_json(out.cert) << "\n";
        return 0;
    }
    json j;
    j["schema"] = "1";
    j["type"] = "belyi-failure";
    j["ok"] = false;
    j["reason"] = out.fail.reason;
    j["trace"] = out.fail.trace;
    emit(j);
    return 3;
}

int cmd_family(int n, int m) {
    BelyiFamily fam = disjoint_family(n, m, 1, QQ(1, 2), 2);
    std::cout << family_to_json(fam) << "\n";
    if (fam.built < fam.requested) return 3;
    if (!fam.disjoint) return 2;
    return 0;
}

int cmd_dependency(int n, const std::string& fs, const std::string& gs, double H) {
    FFElement f = parse_ff(n, fs), g = parse_ff(n, gs);
    Dependency dep = find_dependency(f, g);
    ComparisonConstants cc = comparison_constants(dep, H > 0 ? H : dep.H);
    json j;
    j["schema"] = "1";
    j["type"] = "dependency";
    j["L"] = dep.L;
    j["block"] = dep.block;
    j["H"] = dep.H;
    json rows = json::array();
    for (size_t i = 0; i <= (size_t)dep.block; ++i) {
        json row = json::array();
        for (size_t k = 0; k <= (size_t)dep.block; ++k) row.push_back(dep.coeffs.at(i, k).get_str());
        rows.push_back(row);
    }
    j["coeffs"] = rows;
    j["a"] = qq_to_string(cc.a);
    j["b"] = iv_json(cc.b, 9);
    j["m"] = cc.m;
    emit(j);
    return 0;
}

// shared demo-pipeline assembly for `constants` and `reduce`
struct DemoRun {
    PipelineParams params;
    BelyiFamily fam;
    KappaResult kappa;
    QQ M{1};
};

DemoRun demo_run(int d, const QQ& eps, const std::vector<PlaceQ>& sigma, int demo_n,
                 const QQ& prec) {
    DemoRun r;
    r.params = parameters(d, eps, sigma);
    r.fam = disjoint_family(demo_n, 3, d, eps, (int)sigma.size());
    r.kappa = kappa_from_family(r.fam, sigma, prec);
    double Md = 1.0;
    for (const auto& c : r.fam.maps) Md = std::max(Md, ff_complexity(c.curve_map).H);
    r.M = QQ(mpq_class(Md));
    return r;
}

int cmd_constants(int d, const QQ& eps, const std::string& places, int demo_n, bool ledger_only,
                  const QQ& prec) {
    std::vector<PlaceQ> sigma = parse_places(places);
    DemoRun r = demo_run(d, eps, sigma, demo_n, prec);
    EffectivityConstants c = compute_constants(d, eps, sigma, r.M, r.kappa.kappa, true);
    if (ledger_only) {
        json j;
        j["schema"] = "1";
        j["type"] = "z-ledger";
        json ledger = json::array();
        for (const auto& z : c.ledger)
            ledger.push_back(
                {{"id", z.id}, {"value", qq_to_string(z.value)}, {"formula", z.formula}});
        j["ledger"] = ledger;
        emit(j);
        return 0;
    }
    std::cout << constants_to_json(c) << "\n";
    return 0;
}

int cmd_reduce(const std::string& point, int d, const QQ& eps, const std::string& places,
               int demo_n, const QQ& A, const QQ& prec) {
    std::vector<PlaceQ> sigma = parse_places(places);
    (void)d;
    (void)eps;
    ReductionTrace t = reduce_point(parse_point(point), demo_n, 3, sigma, A, true, prec);
    std::cout << trace_to_json(t) << "\n";
    return t.all_unconditional_hold ? 0 : 2;
}

int cmd_verify_cert(const std::string& file, const QQ& prec) {
    std::ifstream in(file);
    if (!in) throw CLI::ValidationError("verify-cert", "cannot open " + file);
    json j = json::parse(in);
    BelyiCertificate c;
    auto pm = parse_p1_map(j.at("p1_map").get<std::string>());
    if (!pm) throw CLI::ValidationError("verify-cert", "unparsable p1_map");
    c.p1_part = *pm;
    if (j.contains("curve_map")) {
        c.on_curve = true;
        c.curve_map = parse_ff(j.at("n").get<int>(), j.at("curve_map").get<std::string>());
    }
    c.degree = j.at("degree").get<long>();
    const json& cl = j.at("clauses");
    c.clause_unramified = cl.at("unramified_outside_fibre").get<bool>();
    c.clause_image = cl.at("image_condition").get<bool>();
    c.clause_noncritical = cl.at("non_criticality").get<bool>();
    c.clause_bounds = cl.at("bounds").get<bool>();
    bool valid = verify_certificate(c, prec);
    json out;
    out["schema"] = "1";
    out["type"] = "certificate-verification";
    out["valid"] = valid;
    emit(out);
    return valid ? 0 : 2;
}

int cmd_abc_scan(long cmax) {
    json rows = json::array();
    bool all_match = true;
    for (long c = 3; c <= cmax; ++c)
        for (long a = 1; 2 * a < c; ++a) {
            long b = c - a;
            if (zgcd(ZZ(a), ZZ(b)) != 1) continue;
            ZZ rad(1);
            for (auto& [p, e] : factor_integer(ZZ(a) * ZZ(b) * ZZ(c))) {
                (void)e;
                rad *= p;
            }
            ConductorResult cond = conductor(parse_point("[1:" + std::to_string(a) + "/" +
                                                         std::to_string(c) + "]"));
            QIv lograd = log_enclosure(QQ(rad), 128);
            bool match = cond.exact && cond.value.lo <= lograd.hi && lograd.lo <= cond.value.hi;
            all_match = all_match && match;
            rows.push_back({{"a", a},
                            {"b", b},
                            {"c", c},
                            {"rad", rad.get_str()},
                            {"conductor", iv_json(cond.value, 9)},
                            {"match", match}});
        }
    json j;
    j["schema"] = "1";
    j["type"] = "abc-scan";
    j["cmax"] = cmax;
    j["rows"] = rows;
    j["all_match"] = all_match;
    emit(j);
    return all_match ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computational toolkit for effective height and conductor bounds"};
    app.require_subcommand(1);

    std::string precision = "1/100000";
    bool json_flag = false, ledger_flag = false, demo_flag = false;
    long seed = 0;
    app.add_option("--precision", precision, "interval precision as a rational")
        ->capture_default_str();
    app.add_flag("--json", json_flag, "JSON output (always on; accepted for scripting)");
    app.add_flag("--ledger", ledger_flag, "dump the Z-formula ledger only (constants)");
    app.add_flag("--demo", demo_flag, "demo mode (small parameters decoupled from eps)");
    app.add_option("--seed", seed, "seed for sampling harnesses")->capture_default_str();

    std::string point, places = "inf", fs, gs, file, points;
    std::string eps = "1/2", eta = "1/10", aval = "0";
    int n = 2, m = 3, d = 1, demo_n = 2, digits = 4;
    double H = 0;
    long cmax = 100;

    auto* c_height = app.add_subcommand("height", "absolute logarithmic height of a point");
    c_height->add_option("point", point, "point \"[a:b]\"")->required();
    c_height->add_option("--digits", digits, "printed decimal digits")->capture_default_str();

    auto* c_cond = app.add_subcommand("conductor", "conductor relative to {0,1,inf}");
    c_cond->add_option("point", point, "point \"[a:b]\"")->required();

    auto* c_rd = app.add_subcommand("rootdisc", "logarithmic root discriminant of Q(P)");
    c_rd->add_option("point", point, "point \"[a:b]\"")->required();

    auto* c_cs = app.add_subcommand("compactset", "eta-separation from {0,1,inf}");
    c_cs->add_option("point", point, "point \"[a:b]\"")->required();
    c_cs->add_option("--places", places, "comma-separated places, e.g. 2,inf")
        ->capture_default_str();
    c_cs->add_option("--eta", eta, "separation parameter")->capture_default_str();

    auto* c_belyi = app.add_subcommand("belyi", "noncritical Belyi map through a finite set");
    c_belyi->add_option("--n", n, "curve degree")->capture_default_str();
    c_belyi->add_option("--points", points, "semicolon-separated points")->required();

    auto* c_fam = app.add_subcommand("family", "pairwise branch-disjoint Belyi family");
    c_fam->add_option("--n", n, "curve degree")->capture_default_str();
    c_fam->add_option("--m", m, "family size")->capture_default_str();

    auto* c_dep = app.add_subcommand("dependency", "algebraic dependency of two functions");
    c_dep->add_option("--n", n, "curve degree")->capture_default_str();
    c_dep->add_option("--f", fs, "first function, e.g. \"(x)/(1)\"")->required();
    c_dep->add_option("--g", gs, "second function")->required();
    c_dep->add_option("--H", H, "complexity bound override for the constants");

    auto* c_const = app.add_subcommand("constants", "effectivity constants for (d, eps, places)");
    c_const->add_option("--d", d, "degree bound")->capture_default_str();
    c_const->add_option("--eps", eps, "epsilon as a rational")->capture_default_str();
    c_const->add_option("--places", places, "comma-separated places")->capture_default_str();
    c_const->add_option("--demo-n", demo_n, "demo curve degree")->capture_default_str();

    auto* c_red = app.add_subcommand("reduce", "reduction trace at a point");
    c_red->add_option("--point", point, "point \"[a:b]\"")->required();
    c_red->add_option("--d", d, "degree bound")->capture_default_str();
    c_red->add_option("--eps", eps, "epsilon as a rational")->capture_default_str();
    c_red->add_option("--places", places, "comma-separated places")->capture_default_str();
    c_red->add_option("--demo-n", demo_n, "demo curve degree")->capture_default_str();
    c_red->add_option("--A", aval, "injected oracle value (default 0: counterfactual)")
        ->capture_default_str();

    auto* c_vc = app.add_subcommand("verify-cert", "re-derive every clause of a certificate");
    c_vc->add_option("file", file, "certificate JSON file")->required();

    auto* c_scan = app.add_subcommand("abc-scan", "conductor vs radical over abc triples");
    c_scan->add_option("--cmax", cmax, "largest c")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        QQ prec = parse_qq(precision);
        if (c_height->parsed()) return cmd_height(point, prec, digits);
        if (c_cond->parsed()) return cmd_conductor(point);
        if (c_rd->parsed()) return cmd_rootdisc(point);
        if (c_cs->parsed()) return cmd_compactset(point, places, parse_qq(eta));
        if (c_belyi->parsed()) return cmd_belyi(n, points, prec);
        if (c_fam->parsed()) return cmd_family(n, m);
        if (c_dep->parsed()) return cmd_dependency(n, fs, gs, H);
        if (c_const->parsed())
            return cmd_constants(d, parse_qq(eps), places, demo_n, ledger_flag, prec);
        if (c_red->parsed())
            return cmd_reduce(point, d, parse_qq(eps), places, demo_n, parse_qq(aval), prec);
        if (c_vc->parsed()) return cmd_verify_cert(file, prec);
        if (c_scan->parsed()) return cmd_abc_scan(cmax);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
