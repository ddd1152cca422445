#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "heis/bgg.hpp"
#include "heis/errors.hpp"
#include "heis/fd.hpp"
#include "heis/inequalities.hpp"
#include "heis/mcmc.hpp"
#include "heis/measures.hpp"
#include "heis/norm.hpp"
#include "heis/verify.hpp"

namespace heis::cli {

namespace {

Json point_json(const Point& p) { return Json{{"x", p.x}, {"t", p.t}}; }

Json report_json(const InequalityReport& r) {
    Json j{{"name", r.name},         {"n_points", r.n_points}, {"min_margin", r.min_margin},
           {"max_margin", r.max_margin}, {"tolerance", r.tolerance}, {"pass", r.pass},
           {"seed", r.seed}};
    if (r.worst_grid_value) {
        j["worst_grid_value"] = *r.worst_grid_value;
    } else {
        j["worst_point"] = point_json(r.worst_point);
    }
    return j;
}

Json reports_json(const std::vector<InequalityReport>& rs, bool& pass) {
    Json a = Json::array();
    for (const auto& r : rs) {
        a.push_back(report_json(r));
        pass = pass && r.pass;
    }
    return a;
}

Json estimate_json(const MeanEstimate& e) { return Json{{"mean", e.mean}, {"se", e.se}}; }

Json feasibility_json(const FeasibilityResult& f, const std::vector<std::string>& names) {
    Json per = Json::array();
    for (std::size_t i = 0; i < f.per_function_margins.size(); ++i) {
        per.push_back({{"function", names[i]}, {"margin", f.per_function_margins[i]}});
    }
    return Json{{"C", f.C},
                {"D", f.D},
                {"max_violation", f.max_violation},
                {"worst_function", f.worst_function},
                {"feasible", f.feasible},
                {"per_function", per}};
}

Json terms_json(const std::vector<InequalityTerms>& ts) {
    Json a = Json::array();
    for (const auto& t : ts) {
        a.push_back({{"function", t.function},
                     {"lhs", estimate_json(t.lhs)},
                     {"grad", estimate_json(t.grad)},
                     {"mass", estimate_json(t.mass)}});
    }
    return a;
}

MeasureSpec make_spec(const RunConfig& c) {
    MeasureSpec s;
    s.family = parse_family(c.family);
    s.k = c.k;
    s.alpha = c.alpha;
    s.p = c.p;
    s.beta = c.beta;
    s.q = c.q;
    s.validate();
    return s;
}

Json spec_json(const MeasureSpec& s) {
    Json j{{"family", family_name(s.family)}, {"label", s.label()}, {"q", s.q}};
    if (s.family == Family::AlphaPowerP) {
        j["alpha"] = s.alpha;
        j["p"] = s.p;
        j["beta"] = s.beta;
    } else {
        j["k"] = s.k;
    }
    return j;
}

SamplerConfig make_sampler(const RunConfig& c) {
    SamplerConfig s;
    if (c.algorithm == "rwm") {
        s.algorithm = Algorithm::RandomWalkMetropolis;
    } else if (c.algorithm == "mala") {
        s.algorithm = Algorithm::LangevinAdjusted;
    } else {
        throw ConfigError("unknown algorithm '" + c.algorithm + "' (expected rwm or mala)");
    }
    s.n_steps = c.steps;
    s.burn_in = c.burn;
    s.seed = c.seed;
    s.validate();
    return s;
}

std::size_t points_or(const RunConfig& c, std::size_t fallback) { return c.points == 0 ? fallback : c.points; }

Json chains_json(const std::vector<ChainSummary>& cs) {
    Json a = Json::array();
    for (const auto& c : cs) {
        a.push_back({{"acceptance_rate", c.acceptance_rate}, {"step", c.step}, {"mis_tuned", c.mis_tuned}});
    }
    return a;
}

bool run_norm_eval(const RunConfig& c, const GroupParams& g, Json& out) {
    const Point p(c.x, c.t);
    require_dimension(p, g);
    if (!p.all_finite()) throw ConfigError("norm eval: coordinates must be finite");
    const ABPair ab = ab_quantities(p, g);
    out["point"] = point_json(p);
    out["N"] = norm_N(p, g);
    out["A"] = ab.A;
    out["B"] = ab.B;
    if (p.horizontal_norm_sq() > 0.0) {
        const NormEval e = exact_partials(p, g);
        out["dN_dx"] = e.dN_dx;
        out["dN_dt"] = e.dN_dt;
        out["horiz_grad"] = e.horiz_grad;
        out["grad_norm_sq"] = e.grad_norm_sq;
        out["x_dot_grad"] = e.x_dot_grad;
    } else {
        out["note"] = "center line: derivatives not defined";
    }
    return true;
}

CloudSpec cloud_spec(const RunConfig& c, std::size_t default_points) {
    CloudSpec s;
    s.n_points = points_or(c, default_points);
    s.seed = c.seed;
    s.tolerance = c.tolerance;
    s.threads = c.threads;
    return s;
}

bool run_check(const RunConfig& c, const GroupParams& g, Json& out) {
    bool pass = true;
    if (c.command == "check lemma2") {
        out["reports"] = reports_json(check_gradient_bounds(g, cloud_spec(c, 1000000)), pass);
    } else if (c.command == "check intermediate") {
        out["reports"] = reports_json(check_intermediate_bounds(g, cloud_spec(c, 100000)), pass);
        out["pair_partial_ratio_max_t0"] = pair_partial_ratio_max_t0(g, 20000);
    } else if (c.command == "check fundamental") {
        const auto h = check_harmonicity(g, points_or(c, 100), c.seed, c.N_min, c.N_max, 0.3, c.threads);
        const auto id = check_laplacian_identity(g, c.identity_points, c.seed, 1e-5, c.threads);
        out["harmonicity"] = {{"points", h.points},
                              {"N_min", h.N_min},
                              {"N_max", h.N_max},
                              {"slope_min", h.slope_min},
                              {"slope_max", h.slope_max},
                              {"residual_over_truncation", h.residual_over_truncation},
                              {"richardson_over_truncation", h.richardson_over_truncation},
                              {"max_scaled_residual", h.max_scaled_residual},
                              {"failures", h.failures},
                              {"worst_point", point_json(h.worst_point)},
                              {"pass", h.pass}};
        out["laplacian_identity"] = {{"points", id.points},
                                     {"max_abs_err", id.max_abs_err},
                                     {"tolerance", id.tolerance},
                                     {"worst_point", point_json(id.worst_point)},
                                     {"pass", id.pass}};
        pass = h.pass && id.pass;
    } else if (c.command == "check infinity-harmonic") {
        Point p = generic_witness_point(g);
        if (!c.x.empty()) {
            p = Point(c.x, c.t);
            require_dimension(p, g);
        }
        const InfinityLaplacian r = infinity_laplacian_N(p, g, FdConfig{});
        out["point"] = point_json(p);
        out["value"] = r.value;
        out["noise_floor"] = r.noise_floor;
        out["signal_to_noise"] = std::abs(r.value) / r.noise_floor;
        // A pass means the point witnesses Delta_inf N != 0.
        pass = std::abs(r.value) > 10.0 * r.noise_floor;
        out["nonzero"] = pass;
    } else if (c.command == "check constants") {
        Json rows = Json::array();
        int flip = 0;
        bool seen_positive = false;
        for (const auto& r : constants_table(c.n_min, c.n_max)) {
            const bool positive = r.margin > 0.0;
            rows.push_back({{"n", r.n},
                            {"margin", r.margin},
                            {"alpha_opt", r.alpha},
                            {"f_at_alpha", r.f_at_alpha},
                            {"positive", positive}});
            if (positive && !seen_positive && r.n > c.n_min) flip = r.n;
            // once positive, the margin must stay positive
            if (seen_positive && !positive) pass = false;
            seen_positive = seen_positive || positive;
        }
        out["table"] = rows;
        if (flip != 0) {
            out["sign_flip_between"] = {flip - 1, flip};
        } else {
            out["sign_flip_between"] = nullptr;
        }
    } else {
        throw ConfigError("unknown command '" + c.command + "'");
    }
    out["pass"] = pass;
    return pass;
}

bool run_bgg(const RunConfig& c, const GroupParams& g, Json& out) {
    if (!(c.rel_tol > 0.0)) throw ConfigError("bgg compare: --rel-tol must be > 0");
    const BggComparison r = bgg_compare(g, points_or(c, 200), c.seed, QuadratureConfig{}, c.threads);
    out["n"] = r.n;
    out["points"] = r.points;
    out["max_rel_err"] = r.max_rel_err;
    out["mean_rel_err"] = r.mean_rel_err;
    out["worst_point"] = point_json(r.worst_point);
    out["rel_tol"] = c.rel_tol;
    const bool pass = r.max_rel_err <= c.rel_tol;
    out["pass"] = pass;
    return pass;
}

bool run_sample(const RunConfig& c, const GroupParams& g, Json& out, std::string& csv) {
    const MeasureSpec spec = make_spec(c);
    const SampleBatch b = run_chain(spec, g, make_sampler(c), 0);
    std::ostringstream os;
    write_samples_csv(os, b, g);
    csv = os.str();
    std::vector<double> Ns;
    Ns.reserve(b.points.size());
    for (const Point& p : b.points) Ns.push_back(norm_N(p, g));
    out["measure"] = spec_json(spec);
    out["samples"] = b.points.size();
    out["acceptance_rate"] = b.acceptance_rate;
    out["step"] = b.step;
    out["mis_tuned"] = b.mis_tuned;
    out["mean_N"] = estimate_json(batch_means(Ns));
    out["pass"] = !b.mis_tuned;
    return !b.mis_tuned;
}

bool run_verify(const RunConfig& c, const GroupParams& g, Json& out) {
    const MeasureSpec spec = make_spec(c);
    VerifyConfig vc;
    vc.sampler = make_sampler(c);
    vc.z = c.z;
    vc.restrict_exterior = c.restrict_exterior;
    vc.threads = c.threads;
    out["measure"] = spec_json(spec);
    if (c.command == "verify poincare") {
        const PoincareReport r = verify_poincare(spec, g, vc, c.seeds);
        Json per = Json::array();
        for (std::size_t i = 0; i < r.seeds.size(); ++i) {
            Json ratios = Json::array();
            for (const auto& pr : r.ratios[i]) {
                ratios.push_back({{"function", pr.function}, {"ratio", pr.ratio}, {"se", pr.se}});
            }
            per.push_back({{"seed", r.seeds[i]},
                           {"max_ratio", r.max_ratio[i]},
                           {"max_function", r.max_function[i]},
                           {"ratios", ratios}});
        }
        out["per_seed"] = per;
        out["max_ratio_mean"] = r.max_ratio_mean;
        out["max_ratio_spread"] = r.max_ratio_spread;
        out["stability_tolerance"] = r.stability_tolerance;
        out["x1_variance_z"] = r.x1_variance_z;
        out["all_finite"] = r.all_finite;
        out["pass"] = r.pass;
        return r.pass;
    }
    CoerciveReport r;
    if (c.command == "verify ubound") {
        r = verify_ubound(spec, g, vc);
    } else if (c.command == "verify lsi") {
        r = verify_lsi(spec, g, vc);
    } else {
        throw ConfigError("unknown command '" + c.command + "'");
    }
    out["chains"] = chains_json(r.chains);
    out["fit"] = feasibility_json(r.fit, r.functions);
    out["check"] = feasibility_json(r.check, r.functions);
    out["fit_terms"] = terms_json(r.fit_terms);
    out["check_terms"] = terms_json(r.check_terms);
    bool unused = true;
    out["conditions"] = reports_json(r.conditions, unused);
    out["pass"] = r.pass;
    return r.pass;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace

Json RunConfig::to_json() const {
    Json j{{"command", command}, {"n", n}, {"seed", seed}, {"threads", threads}, {"format", format}};
    if (command == "norm eval" || command == "check infinity-harmonic") {
        j["x"] = x;
        j["t"] = t;
    }
    if (command == "check lemma2" || command == "check intermediate") {
        j["points"] = points;
        j["tolerance"] = tolerance;
    }
    if (command == "check fundamental") {
        j["points"] = points;
        j["identity_points"] = identity_points;
        j["N_min"] = N_min;
        j["N_max"] = N_max;
    }
    if (command == "check constants") j["n_range"] = {n_min, n_max};
    if (command == "bgg compare") {
        j["points"] = points;
        j["rel_tol"] = rel_tol;
    }
    if (command.rfind("measure", 0) == 0 || command.rfind("verify", 0) == 0) {
        j["family"] = family;
        if (family == "alpha-power") {
            j["alpha"] = alpha;
            j["p"] = p;
            j["beta"] = beta;
        } else {
            j["k"] = k;
        }
        j["q"] = q;
        j["algorithm"] = algorithm;
        j["steps"] = steps;
        j["burn"] = burn;
    }
    if (command.rfind("verify", 0) == 0) {
        j["z"] = z;
        j["restrict_exterior"] = restrict_exterior;
        if (command == "verify poincare") j["seeds"] = seeds;
    }
    if (output_path) j["output_path"] = *output_path;
    return j;
}

RunResult run(const RunConfig& cfg) {
    RunResult res;
    Json& rep = res.report;
    rep["schema"] = kSchemaVersion;
    rep["config"] = cfg.to_json();
    if (cfg.timestamp) rep["timestamp"] = utc_now();
    Json body = Json::object();
    try {
        if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("--format must be json or csv");
        if (cfg.format == "csv" && cfg.command != "measure sample") {
            throw ConfigError("--format csv is only available for measure sample");
        }
        const GroupParams g(cfg.n);
        bool pass = false;
        const std::string& cmd = cfg.command;
        if (cmd == "norm eval") {
            pass = run_norm_eval(cfg, g, body);
        } else if (cmd.rfind("check ", 0) == 0) {
            pass = run_check(cfg, g, body);
        } else if (cmd == "bgg compare") {
            pass = run_bgg(cfg, g, body);
        } else if (cmd == "measure sample") {
            pass = run_sample(cfg, g, body, res.csv);
        } else if (cmd.rfind("verify ", 0) == 0) {
            pass = run_verify(cfg, g, body);
        } else {
            throw ConfigError("unknown command '" + cmd + "'");
        }
        res.exit_code = pass ? kExitPass : kExitFail;
    } catch (const ConfigError& e) {
        res.exit_code = kExitConfig;
        body = {{"error", e.what()}};
    } catch (const DimensionError& e) {
        res.exit_code = kExitConfig;
        body = {{"error", e.what()}};
    } catch (const std::exception& e) {
        res.exit_code = kExitFail;
        body = {{"error", e.what()}};
    }
    rep["result"] = std::move(body);
    rep["exit_code"] = res.exit_code;
    return res;
}

namespace {

struct Leaf {
    CLI::App* app;
    std::string command;
};

void add_common(CLI::App* a, RunConfig& c, bool with_seed = true) {
    a->add_option("--n", c.n, "group order (>= 2)");
    if (with_seed) a->add_option("--seed", c.seed, "RNG seed");
    a->add_option("--threads", c.threads, "worker threads (0 = all)");
    a->add_option("--out", c.output_path, "write the report (or CSV samples) to this path");
    a->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    a->add_flag("!--no-timestamp", c.timestamp, "omit the timestamp field");
}

void add_measure(CLI::App* a, RunConfig& c) {
    a->add_option("--family", c.family, "power | cosh-power | power-log | alpha-power");
    a->add_option("--k", c.k, "exponent k");
    a->add_option("--alpha", c.alpha, "alpha-power scale");
    a->add_option("--p", c.p, "alpha-power exponent");
    a->add_option("--beta", c.beta, "log-Sobolev order");
    a->add_option("--q", c.q, "inequality exponent");
    a->add_option("--algorithm", c.algorithm, "rwm or mala");
    a->add_option("--steps", c.steps, "chain length including burn-in");
    a->add_option("--burn", c.burn, "burn-in iterations");
}

bool parse_range(const std::string& s, int& lo, int& hi) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) return false;
    try {
        std::size_t used = 0;
        lo = std::stoi(s.substr(0, dots), &used);
        if (used != dots) return false;
        const std::string rest = s.substr(dots + 2);
        hi = std::stoi(rest, &used);
        return used == rest.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Numerical checks on the anisotropic Heisenberg group H_2n(1/2, 1)", "heis"};
    app.require_subcommand(1);
    std::vector<Leaf> leaves;
    std::string n_range;

    auto* norm = app.add_subcommand("norm", "closed-form norm")->require_subcommand(1);
    auto* norm_eval = norm->add_subcommand("eval", "N and its derivatives at one point");
    add_common(norm_eval, cfg, false);
    norm_eval->add_option("--x", cfg.x, "horizontal coordinates x_1..x_2n")->delimiter(',')->required();
    norm_eval->add_option("--t", cfg.t, "central coordinate");
    leaves.push_back({norm_eval, "norm eval"});

    auto* check = app.add_subcommand("check", "pointwise checks")->require_subcommand(1);
    for (const char* name : {"lemma2", "intermediate"}) {
        const bool grad = std::string(name) == "lemma2";
        auto* a = check->add_subcommand(name, grad ? "lower/upper bounds on x.grad N and |grad N|"
                                                   : "bounds on the individual partials of N");
        if (grad) a->alias("gradient-bounds");
        add_common(a, cfg);
        a->add_option("--points", cfg.points, "cloud size");
        a->add_option("--tolerance", cfg.tolerance, "margin tolerance");
        leaves.push_back({a, std::string("check ") + name});
    }
    auto* fund = check->add_subcommand("fundamental", "harmonicity of N^{2-Q} and the Delta N identity");
    add_common(fund, cfg);
    fund->add_option("--points", cfg.points, "harmonicity points");
    fund->add_option("--identity-points", cfg.identity_points, "identity points");
    fund->add_option("--N-min", cfg.N_min, "smallest N");
    fund->add_option("--N-max", cfg.N_max, "largest N");
    leaves.push_back({fund, "check fundamental"});
    auto* inf = check->add_subcommand("infinity-harmonic", "Delta_inf N at a witness point");
    add_common(inf, cfg, false);
    inf->add_option("--x", cfg.x, "horizontal coordinates (default: witness point)")->delimiter(',');
    inf->add_option("--t", cfg.t, "central coordinate");
    leaves.push_back({inf, "check infinity-harmonic"});
    auto* consts = check->add_subcommand("constants", "U-bound constant margin over n");
    add_common(consts, cfg, false);
    consts->add_option("--n-range", n_range, "lo..hi")->default_val("2..20");
    leaves.push_back({consts, "check constants"});

    auto* bgg = app.add_subcommand("bgg", "integral representation")->require_subcommand(1);
    auto* cmp = bgg->add_subcommand("compare", "quadrature vs closed form");
    add_common(cmp, cfg);
    cmp->add_option("--points", cfg.points, "number of points");
    cmp->add_option("--rel-tol", cfg.rel_tol, "pass threshold on the max relative error");
    leaves.push_back({cmp, "bgg compare"});

    auto* measure = app.add_subcommand("measure", "densities exp(-g(N))")->require_subcommand(1);
    auto* sample = measure->add_subcommand("sample", "run one chain and dump samples as CSV");
    add_common(sample, cfg);
    add_measure(sample, cfg);
    leaves.push_back({sample, "measure sample"});

    auto* verify = app.add_subcommand("verify", "coercive inequalities")->require_subcommand(1);
    CLI::App* lsi = nullptr;
    for (const char* name : {"ubound", "poincare", "lsi"}) {
        auto* a = verify->add_subcommand(name, std::string("verify ") + name);
        add_common(a, cfg);
        add_measure(a, cfg);
        a->add_option("--z", cfg.z, "standard errors of slack on the recheck");
        if (std::string(name) == "ubound") a->add_flag("--restrict-exterior", cfg.restrict_exterior);
        if (std::string(name) == "poincare") a->add_option("--seeds", cfg.seeds, "independent chains");
        if (std::string(name) == "lsi") lsi = a;
        leaves.push_back({a, std::string("verify ") + name});
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "heis: " << e.what() << "\n";
        return kExitConfig;
    }
    for (const Leaf& l : leaves) {
        if (l.app->parsed()) cfg.command = l.command;
    }
    if (cfg.command == "check constants" && !parse_range(n_range, cfg.n_min, cfg.n_max)) {
        err << "heis: --n-range must look like 2..20\n";
        return kExitConfig;
    }
    if (cfg.command == "verify lsi" && lsi->count("--family") == 0) cfg.family = "alpha-power";

    const RunResult res = run(cfg);
    if (res.exit_code == kExitConfig) err << "heis: " << res.report["result"]["error"].get<std::string>() << "\n";

    const std::string json = res.report.dump(2) + "\n";
    if (cfg.command == "measure sample" && res.exit_code != kExitConfig) {
        if (cfg.output_path) {
            std::ofstream f(*cfg.output_path);
            if (!f) {
                err << "heis: cannot write " << *cfg.output_path << "\n";
                return kExitConfig;
            }
            f << res.csv;
            if (cfg.format == "json") out << json;
        } else {
            out << res.csv;
        }
        return res.exit_code;
    }
    if (cfg.output_path) {
        std::ofstream f(*cfg.output_path);
        if (!f) {
            err << "heis: cannot write " << *cfg.output_path << "\n";
            return kExitConfig;
        }
        f << json;
    } else {
        out << json;
    }
    return res.exit_code;
}

}  // namespace heis::cli
