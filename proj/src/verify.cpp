#include "heis/verify.hpp"

#include <algorithm>
#include <cmath>

#include "heis/errors.hpp"
#include "heis/parallel.hpp"

namespace heis {

namespace {

void strip_series(std::vector<InequalityTerms>& ts) {
    for (auto& t : ts) {
        t.lhs_series = {};
        t.grad_series = {};
        t.mass_series = {};
    }
}

ChainSummary summarize(const SampleBatch& b) { return {b.acceptance_rate, b.step, b.mis_tuned}; }

template <class TermsFn>
CoerciveReport run_two_chains(const std::string& kind, const MeasureSpec& spec, const GroupParams& params,
                              const VerifyConfig& cfg, TermsFn terms_of) {
    spec.validate();
    SamplerConfig sc = cfg.sampler;
    sc.n_chains = 2;
    const auto batches = run_chains(spec, params, sc, cfg.threads);
    const auto funcs = default_test_functions(params);

    CoerciveReport r;
    r.kind = kind;
    r.spec = spec;
    for (const auto& f : funcs) r.functions.push_back(f.name());
    for (const auto& b : batches) r.chains.push_back(summarize(b));

    auto fit_terms = terms_of(funcs, compute_observables(funcs, batches[0], params, cfg.threads));
    auto check_terms = terms_of(funcs, compute_observables(funcs, batches[1], params, cfg.threads));
    r.fit = fit_constants(fit_terms);
    r.check = check_constants(check_terms, r.fit.C, r.fit.D, cfg.z, cfg.batches, &fit_terms);
    strip_series(fit_terms);
    strip_series(check_terms);
    r.fit_terms = std::move(fit_terms);
    r.check_terms = std::move(check_terms);
    return r;
}

}  // namespace

std::vector<double> condition_grid(const MeasureSpec& spec) {
    switch (spec.family) {
        case Family::CoshPowerK:
            return linear_grid(1.5, 10.0, 851);
        case Family::AlphaPowerP:
            return log_grid(1.0, 1e6, 2000);
        default:
            return linear_grid(1.0, 10.0, 901);
    }
}

CoerciveReport verify_ubound(const MeasureSpec& spec, const GroupParams& params, const VerifyConfig& cfg) {
    CoerciveReport r = run_two_chains("ubound", spec, params, cfg, [&](const auto& funcs, const Observables& o) {
        return ubound_terms(funcs, spec, o, cfg.restrict_exterior, cfg.batches);
    });
    r.conditions.push_back(check_ubound_condition(spec, condition_grid(spec)));
    r.pass = r.check.feasible && r.conditions[0].pass;
    return r;
}

CoerciveReport verify_lsi(const MeasureSpec& spec, const GroupParams& params, const VerifyConfig& cfg) {
    if (spec.family != Family::AlphaPowerP) throw ConfigError("verify_lsi: family must be alpha-power");
    CoerciveReport r = run_two_chains("lsi", spec, params, cfg, [&](const auto& funcs, const Observables& o) {
        return lsi_terms(funcs, spec, o, cfg.batches);
    });
    const auto grid = condition_grid(spec);
    r.conditions = check_lsi_conditions(spec, grid, lsi_min_c(spec, grid), lsi_min_d(spec));
    r.pass = r.check.feasible;
    for (const auto& c : r.conditions) r.pass = r.pass && c.pass;
    return r;
}

PoincareReport verify_poincare(const MeasureSpec& spec, const GroupParams& params, const VerifyConfig& cfg,
                               int seeds) {
    spec.validate();
    if (seeds < 2) throw ConfigError("verify_poincare: need at least 2 seeds");
    PoincareReport r;
    r.spec = spec;
    const auto funcs = default_test_functions(params);
    const std::size_t m = static_cast<std::size_t>(seeds);
    r.ratios.resize(m);
    std::vector<double> var_x1(m);
    for (std::size_t i = 0; i < m; ++i) r.seeds.push_back(cfg.sampler.seed + i);

    // Chains run one per task; each is sequential so results do not depend
    // on the thread count.
    parallel_for_chunks(m, 1, cfg.threads, [&](std::size_t i, std::size_t, std::size_t) {
        SamplerConfig sc = cfg.sampler;
        sc.seed = r.seeds[i];
        const SampleBatch b = run_chain(spec, params, sc, 0);
        const Observables o = compute_observables(funcs, b, params);
        r.ratios[i] = poincare_ratios(funcs, spec.q, o, cfg.batches);
        double mean = 0.0, var = 0.0;
        for (const Point& p : b.points) mean += p.x[0];
        mean /= static_cast<double>(b.points.size());
        for (const Point& p : b.points) var += (p.x[0] - mean) * (p.x[0] - mean);
        var_x1[i] = var / static_cast<double>(b.points.size());
    });

    r.all_finite = true;
    for (std::size_t i = 0; i < m; ++i) {
        double mx = -1.0;
        std::string who;
        for (const auto& pr : r.ratios[i]) {
            r.all_finite = r.all_finite && std::isfinite(pr.ratio) && std::isfinite(pr.se);
            if (pr.ratio > mx) {
                mx = pr.ratio;
                who = pr.function;
            }
            if (pr.function == "x_1" && spec.q == 2.0) {
                const double z = std::abs(pr.ratio - var_x1[i]) / std::max(pr.se, 1e-300);
                r.x1_variance_z = std::max(r.x1_variance_z, z);
            }
        }
        r.max_ratio.push_back(mx);
        r.max_function.push_back(who);
        r.max_ratio_mean += mx / static_cast<double>(m);
    }
    for (double v : r.max_ratio) {
        r.max_ratio_spread = std::max(r.max_ratio_spread, std::abs(v / r.max_ratio_mean - 1.0));
    }
    r.pass = r.all_finite && r.max_ratio_spread <= r.stability_tolerance && r.x1_variance_z <= 3.0;
    return r;
}

}  // namespace heis
