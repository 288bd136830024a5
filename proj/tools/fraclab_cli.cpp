// fraclab: weighted fractional Poincare quotients, seminorms and scaling
// experiments on non-Lipschitz planar domains.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fraclab/config.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/fields.hpp"
#include "fraclab/functionals.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/thresholds.hpp"

namespace {

using nlohmann::json;
using namespace fraclab;

struct GlobalOpts {
    std::string config_path;
    std::string out = "-";
    std::string format = "json";
    long long seed = -1;     // -1: keep config/default
    long long samples = -1;  // -1: keep config/default
    int workers = -1;
};

void write_output(const GlobalOpts& g, const std::string& text) {
    if (g.out == "-" || g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(g.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output path: " + g.out);
    os << text;
    if (!os) throw std::runtime_error("failed writing output path: " + g.out);
}

config::KvDoc base_doc(const GlobalOpts& g) {
    config::KvDoc doc;
    if (!g.config_path.empty()) doc = config::KvDoc::load(g.config_path);
    if (g.seed >= 0) doc.set_int("mc.seed", g.seed);
    if (g.samples >= 0) doc.set_int("mc.n_pairs", g.samples);
    if (g.workers >= 0) doc.set_int("mc.workers", g.workers);
    return doc;
}

json doc_json(const config::KvDoc& doc) {
    json j = json::object();
    for (const auto& [k, v] : doc.items()) j[k] = v;
    return j;
}

// Domain/field/param flags shared by the estimator subcommands; only flags
// the user passed override the config document.
struct SpecFlags {
    std::string domain, field;
    long long n = -1;
    double radius = -1, alpha = -1, beta = -1, side = -1;
    std::string stems;
    long long resolution = -1;
    double value = std::nan(""), freq = std::nan(""), width = std::nan(""), nu = std::nan("");
    long long axis = -1, index = -1;
    std::string center;
    double s = std::nan(""), p = std::nan(""), q = std::nan(""), a = std::nan(""),
           b = std::nan(""), tau = std::nan("");

    void add_domain_flags(CLI::App* cmd) {
        cmd->add_option("--domain", domain, "domain family: cube|ball|cusp|mushroom");
        cmd->add_option("--n", n, "ambient dimension (cube/ball)");
        cmd->add_option("--radius", radius, "ball radius");
        cmd->add_option("--alpha", alpha, "cusp exponent in (0,1]");
        cmd->add_option("--beta", beta, "mushroom stem exponent >= 1");
        cmd->add_option("--cube-side", side, "mushroom cube side");
        cmd->add_option("--stems", stems, "mushroom stem radii, comma separated, decreasing");
        cmd->add_option("--resolution", resolution, "boundary polyline resolution");
    }
    void add_field_flags(CLI::App* cmd) {
        cmd->add_option("--field", field,
                        "field family: constant|coordinate|sine|gaussian|cusp_power|mushroom_bump");
        cmd->add_option("--value", value, "constant field value");
        cmd->add_option("--axis", axis, "coordinate/sine axis (1-based)");
        cmd->add_option("--freq", freq, "sine frequency");
        cmd->add_option("--center", center, "gaussian center, comma separated");
        cmd->add_option("--width", width, "gaussian width");
        cmd->add_option("--nu", nu, "cusp power exponent");
        cmd->add_option("--index", index, "mushroom bump stem index");
    }
    void add_param_flags(CLI::App* cmd) {
        cmd->add_option("--s", s, "fractional order s in (0,1)");
        cmd->add_option("--p", p, "integrability p >= 1");
        cmd->add_option("--q", q, "target norm exponent q >= p");
        cmd->add_option("--a", a, "norm-side distance weight power a >= 0");
        cmd->add_option("--b", b, "seminorm-side distance weight power b");
        cmd->add_option("--tau", tau, "restriction radius factor tau in (0,1)");
    }

    void overlay(config::KvDoc& doc) const {
        if (!domain.empty()) doc.set("domain.type", domain);
        if (n >= 0) doc.set_int("domain.n", n);
        if (radius >= 0) doc.set_double("domain.radius", radius);
        if (alpha >= 0) doc.set_double("domain.alpha", alpha);
        if (beta >= 0) doc.set_double("domain.beta", beta);
        if (side >= 0) doc.set_double("domain.cube_side", side);
        if (!stems.empty()) doc.set("domain.stems", stems);
        if (resolution >= 0) doc.set_int("domain.resolution", resolution);
        if (!field.empty()) doc.set("field.type", field);
        if (!std::isnan(value)) doc.set_double("field.value", value);
        if (axis >= 0) doc.set_int("field.axis", axis);
        if (!std::isnan(freq)) doc.set_double("field.freq", freq);
        if (!center.empty()) doc.set("field.center", center);
        if (!std::isnan(width)) doc.set_double("field.width", width);
        if (!std::isnan(nu)) doc.set_double("field.nu", nu);
        if (index >= 0) doc.set_int("field.index", index);
        if (!std::isnan(s)) doc.set_double("params.s", s);
        if (!std::isnan(p)) doc.set_double("params.p", p);
        if (!std::isnan(q)) doc.set_double("params.q", q);
        if (!std::isnan(a)) doc.set_double("params.a", a);
        if (!std::isnan(b)) doc.set_double("params.b", b);
        if (!std::isnan(tau)) doc.set_double("params.tau", tau);
    }
};

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("bad number list for ") + what + ": " + s);
        }
    }
    if (out.empty()) throw std::runtime_error(std::string("empty list for ") + what);
    return out;
}

int report_exit(const experiments::ExperimentReport& rep, const GlobalOpts& g) {
    write_output(g, rep.to_json().dump(2) + "\n");
    return rep.passed() ? 0 : 1;
}

// threshold rule dispatch; numeric ids are accepted as aliases
json run_threshold_rule(const std::string& rule, double n, double p, double q, double a, double s,
                        double b, double alpha, double beta) {
    using namespace thresholds;
    if (rule == "john" || rule == "3.3") return experiments::threshold_report_json(john_b_max<double>(n, p, q, a, s));
    if (rule == "john-p1" || rule == "3.5")
        return experiments::threshold_report_json(john_p1_b_max<double>(n, q, a, s));
    if (rule == "beta-john" || rule == "4.2")
        return experiments::threshold_report_json(beta_john_b_sup<double>(n, p, q, a, s, beta));
    if (rule == "beta-john-p1" || rule == "4.3")
        return experiments::threshold_report_json(beta_john_p1_b_max<double>(n, q, a, s, beta));
    if (rule == "mushroom-q" || rule == "4.4")
        return experiments::threshold_report_json(mushroom_q_max<double>(n, a, p, b, s, beta));
    if (rule == "holder" || rule == "5.1")
        return experiments::threshold_report_json(holder_b_max<double>(n, p, q, alpha, s));
    if (rule == "holder-sharp" || rule == "5.2")
        return experiments::threshold_report_json(holder_b_sharp<double>(n, p, q, alpha, s));
    if (rule == "window") {
        const auto w = cusp_nu_window<double>(n, alpha, p, q, s, b);
        return json{{"rule", "nu-window"},
                    {"nonempty", w.nonempty},
                    {"lo", w.lo},
                    {"hi", w.hi}};
    }
    if (rule == "scaling") {
        const auto e = mushroom_scaling_exponents<double>(n, p, s, beta, a, b, q);
        return json{{"rule", "mushroom-scaling-exponents"},
                    {"lhs_exp", e.lhs_exp},
                    {"rhs_exp", e.rhs_exp},
                    {"other_exp", e.other_exp}};
    }
    throw std::runtime_error("unknown threshold rule: " + rule);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fraclab: fractional Poincare quotient laboratory"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "key-value config file (flags override it)");
    app.add_option("--out", g.out, "output path ('-' = stdout)");
    app.add_option("--format", g.format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", g.seed, "top-level seed");
    app.add_option("--samples", g.samples, "MC sample/pair budget per cell");
    app.add_option("--workers", g.workers, "worker threads (0 = auto; result is identical)");

    SpecFlags sf;

    auto* cmd_quotient = app.add_subcommand("quotient", "Poincare quotient norm/seminorm");
    auto* cmd_seminorm = app.add_subcommand("seminorm", "weighted fractional seminorm");
    auto* cmd_norm = app.add_subcommand("norm", "inf over constants of the weighted Lq norm");
    for (auto* c : {cmd_quotient, cmd_seminorm, cmd_norm}) {
        sf.add_domain_flags(c);
        sf.add_field_flags(c);
        sf.add_param_flags(c);
    }
    bool seminorm_full = false;
    long long oracle_nodes = 0;
    cmd_seminorm->add_flag("--full", seminorm_full, "full Omega x Omega seminorm");
    cmd_seminorm->add_option("--oracle-nodes", oracle_nodes,
                             "also run the deterministic grid oracle (unit square only)");

    auto* cmd_thresh = app.add_subcommand("thresholds", "threshold exponent arithmetic");
    std::string rule;
    cmd_thresh->add_option("--theorem", rule,
                           "rule: john|john-p1|beta-john|beta-john-p1|mushroom-q|holder|"
                           "holder-sharp|window|scaling (numeric aliases 3.3/3.5/4.2/4.3/4.4/5.1/5.2)")
        ->required();
    sf.add_param_flags(cmd_thresh);
    cmd_thresh->add_option("--n", sf.n, "dimension n");
    cmd_thresh->add_option("--alpha", sf.alpha, "cusp exponent");
    cmd_thresh->add_option("--beta", sf.beta, "mushroom stem exponent");

    auto* cmd_verify = app.add_subcommand("verify-prop21", "explicit-constant inequality check");
    sf.add_domain_flags(cmd_verify);
    sf.add_param_flags(cmd_verify);
    long long verify_count = 20;
    cmd_verify->add_option("--count", verify_count, "number of random bump fields");

    auto* cmd_mush = app.add_subcommand("mushroom-scaling", "mushroom scaling-law study");
    sf.add_param_flags(cmd_mush);
    cmd_mush->add_option("--beta", sf.beta, "mushroom stem exponent");
    std::string r_list_str = "0.25,0.125,0.0625,0.03125";
    cmd_mush->add_option("--r-list", r_list_str, "decreasing scales, comma separated");

    auto* cmd_cusp = app.add_subcommand("cusp-divergence", "cusp truncated-integral study");
    sf.add_param_flags(cmd_cusp);
    cmd_cusp->add_option("--alpha", sf.alpha, "cusp exponent");
    cmd_cusp->add_option("--nu", sf.nu, "power field exponent");
    std::string eps_list_str = "0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625,0.001953125";
    cmd_cusp->add_option("--eps-list", eps_list_str, "decreasing truncation levels");

    auto* cmd_bisect = app.add_subcommand("bisect", "empirical threshold bisection");
    std::string study = "mushroom_q";
    double blo = 0.0, bhi = 0.0, btol = 0.0;
    cmd_bisect->add_option("--study", study, "mushroom_q | cusp_b")
        ->check(CLI::IsMember({"mushroom_q", "cusp_b"}));
    cmd_bisect->add_option("--lo", blo, "bracket lower end")->required();
    cmd_bisect->add_option("--hi", bhi, "bracket upper end")->required();
    cmd_bisect->add_option("--tol", btol, "bisection bracket tolerance");
    sf.add_param_flags(cmd_bisect);
    cmd_bisect->add_option("--alpha", sf.alpha, "cusp exponent");
    cmd_bisect->add_option("--beta", sf.beta, "mushroom stem exponent");
    cmd_bisect->add_option("--r-list", r_list_str, "mushroom scales");
    cmd_bisect->add_option("--eps-list", eps_list_str, "cusp truncation levels");

    auto* cmd_sweep = app.add_subcommand("sweep", "parameter-grid quotient sweep to CSV");
    sf.add_domain_flags(cmd_sweep);
    sf.add_field_flags(cmd_sweep);
    std::string sw_s = "0.5", sw_p = "2", sw_q = "2", sw_a = "0", sw_b = "0";
    cmd_sweep->add_option("--s-list", sw_s, "s grid");
    cmd_sweep->add_option("--p-list", sw_p, "p grid");
    cmd_sweep->add_option("--q-list", sw_q, "q grid");
    cmd_sweep->add_option("--a-list", sw_a, "a grid");
    cmd_sweep->add_option("--b-list", sw_b, "b grid");

    auto* cmd_boundary = app.add_subcommand("boundary", "export the boundary polyline as CSV");
    sf.add_domain_flags(cmd_boundary);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        config::KvDoc doc = base_doc(g);
        sf.overlay(doc);

        if (cmd_thresh->parsed()) {
            const double n = doc.get_double_or("domain.n", sf.n >= 0 ? double(sf.n) : 2.0);
            const auto pr = config::frac_params_from_kv(doc);
            const json j = run_threshold_rule(rule, n, pr.p, pr.q, pr.a, pr.s, pr.b,
                                              doc.get_double_or("domain.alpha", 0.5),
                                              doc.get_double_or("domain.beta", 1.0));
            write_output(g, j.dump(2) + "\n");
            return 0;
        }

        if (cmd_boundary->parsed()) {
            if (!doc.has("domain.type")) doc.set("domain.type", "cube");
            const auto dom = config::domain_from_kv(doc);
            std::ostringstream os;
            geom::write_polyline_csv(dom.boundary_polyline(), os);
            write_output(g, os.str());
            return 0;
        }

        if (cmd_quotient->parsed() || cmd_seminorm->parsed() || cmd_norm->parsed()) {
            if (!doc.has("domain.type")) doc.set("domain.type", "cube");
            if (!doc.has("field.type")) doc.set("field.type", "coordinate");
            const auto dom = config::domain_from_kv(doc);
            const auto field = config::field_from_kv(doc, dom);
            const auto pr = config::frac_params_from_kv(doc);
            const auto mcc = config::mc_config_from_kv(doc);
            json out;
            out["config"] = doc_json(doc);
            if (cmd_norm->parsed()) {
                out["subcommand"] = "norm";
                const auto res = funct::inf_lq_norm(field, dom, pr.q, pr.a, mcc);
                out["c_star"] = res.c_star;
                out["result"] = experiments::estimate_json(res.estimate);
            } else if (cmd_seminorm->parsed()) {
                out["subcommand"] = "seminorm";
                const auto res = seminorm_full
                                     ? funct::frac_seminorm_full(field, dom, pr.s, pr.p, mcc)
                                     : funct::frac_seminorm_restricted(field, dom, pr, mcc);
                out["full"] = seminorm_full;
                out["result"] = experiments::estimate_json(res);
                if (oracle_nodes > 0) {
                    const auto br = funct::grid_oracle_seminorm(
                        field, pr, static_cast<int>(oracle_nodes), seminorm_full, mcc.workers);
                    out["oracle"] = json{{"lower", br.lower},
                                         {"upper", br.upper},
                                         {"nodes_per_axis", br.nodes_per_axis}};
                }
            } else {
                out["subcommand"] = "quotient";
                const auto res = funct::poincare_quotient(field, dom, pr, mcc);
                out["numerator"] = experiments::estimate_json(res.numerator.estimate);
                out["c_star"] = res.numerator.c_star;
                out["denominator"] = experiments::estimate_json(res.denominator);
                out["result"] = experiments::estimate_json(res.quotient);
            }
            write_output(g, out.dump(2) + "\n");
            return 0;
        }

        if (cmd_verify->parsed()) {
            if (!doc.has("domain.type")) doc.set("domain.type", "cube");
            const auto dom = config::domain_from_kv(doc);
            const auto pr = config::frac_params_from_kv(doc);
            const auto mcc = config::mc_config_from_kv(doc);
            const auto fields_ = experiments::random_bump_fields(
                dom, static_cast<int>(verify_count), mcc.seed);
            const auto rep = experiments::verify_explicit_constant(dom, fields_, pr.s, pr.p, mcc);
            return report_exit(rep, g);
        }

        if (cmd_mush->parsed()) {
            experiments::MushroomStudyConfig mcfg;
            mcfg.beta = doc.get_double_or("domain.beta", 2.0);
            const auto pr = config::frac_params_from_kv(doc);
            mcfg.p = pr.p;
            mcfg.q = pr.q;
            mcfg.s = pr.s;
            mcfg.a = pr.a;
            mcfg.b = pr.b;
            mcfg.r_list = parse_list(r_list_str, "--r-list");
            mcfg.mc = config::mc_config_from_kv(doc);
            return report_exit(experiments::mushroom_scaling_study(mcfg), g);
        }

        if (cmd_cusp->parsed()) {
            experiments::CuspStudyConfig ccfg;
            ccfg.alpha = doc.get_double_or("domain.alpha", 0.5);
            const auto pr = config::frac_params_from_kv(doc);
            ccfg.p = pr.p;
            ccfg.q = pr.q;
            ccfg.s = pr.s;
            ccfg.b = pr.b;
            ccfg.nu = doc.get_double_or("field.nu", 1.75);
            ccfg.eps_list = parse_list(eps_list_str, "--eps-list");
            ccfg.mc = config::mc_config_from_kv(doc);
            return report_exit(experiments::cusp_divergence_study(ccfg), g);
        }

        if (cmd_bisect->parsed()) {
            experiments::BisectionConfig bcfg;
            const auto pr = config::frac_params_from_kv(doc);
            const auto mcc = config::mc_config_from_kv(doc);
            bcfg.lo = blo;
            bcfg.hi = bhi;
            if (study == "mushroom_q") {
                bcfg.study = experiments::BisectionStudy::MushroomQ;
                bcfg.tol = btol > 0.0 ? btol : 0.02;
                bcfg.mushroom.beta = doc.get_double_or("domain.beta", 2.0);
                bcfg.mushroom.p = pr.p;
                bcfg.mushroom.s = pr.s;
                bcfg.mushroom.a = pr.a;
                bcfg.mushroom.b = pr.b;
                bcfg.mushroom.r_list = parse_list(r_list_str, "--r-list");
                bcfg.mushroom.mc = mcc;
            } else {
                bcfg.study = experiments::BisectionStudy::CuspB;
                bcfg.tol = btol > 0.0 ? btol : 0.025;
                bcfg.cusp.alpha = doc.get_double_or("domain.alpha", 0.5);
                bcfg.cusp.p = pr.p;
                bcfg.cusp.q = pr.q;
                bcfg.cusp.s = pr.s;
                bcfg.cusp.eps_list = parse_list(eps_list_str, "--eps-list");
                bcfg.cusp.mc = mcc;
            }
            return report_exit(experiments::threshold_bisection(bcfg), g);
        }

        if (cmd_sweep->parsed()) {
            if (!doc.has("domain.type")) doc.set("domain.type", "cube");
            if (!doc.has("field.type")) doc.set("field.type", "coordinate");
            experiments::SweepConfig scfg{config::domain_from_kv(doc),
                                          fields::Field(fields::Constant{0.0})};
            scfg.field = config::field_from_kv(doc, scfg.domain);
            auto list_from = [&](const char* key, const std::string& flag) {
                return doc.has(key) ? doc.get_list(key) : parse_list(flag, key);
            };
            scfg.s_list = list_from("sweep.s", sw_s);
            scfg.p_list = list_from("sweep.p", sw_p);
            scfg.q_list = list_from("sweep.q", sw_q);
            scfg.a_list = list_from("sweep.a", sw_a);
            scfg.b_list = list_from("sweep.b", sw_b);
            scfg.tau = doc.get_double_or("params.tau", 0.5);
            scfg.mc = config::mc_config_from_kv(doc);
            std::ostringstream os;
            experiments::sweep(scfg, os);
            write_output(g, os.str());
            return 0;
        }

        std::cerr << "no subcommand dispatched\n";
        return 2;
    } catch (const funct::UndefinedQuotient& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
