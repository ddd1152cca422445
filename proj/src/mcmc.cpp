#include "heis/mcmc.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "heis/errors.hpp"
#include "heis/norm.hpp"
#include "heis/parallel.hpp"
#include "heis/sampling.hpp"

namespace heis {

void SamplerConfig::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("sampler: step must be > 0");
    if (!(burn_in < n_steps)) throw ConfigError("sampler: burn_in must be < n_steps");
    if (n_chains < 1) throw ConfigError("sampler: n_chains must be >= 1");
    if (target_acceptance < 0.0 || target_acceptance >= 1.0) {
        throw ConfigError("sampler: target_acceptance must be in [0, 1)");
    }
}

namespace {

constexpr double kCenterLine = 1e-8;

double x_norm(const Point& p) { return std::sqrt(p.horizontal_norm_sq()); }

// log q(to | from) for the Langevin proposal, up to a constant.
double langevin_log_q(const Point& to, const Point& from, const std::vector<double>& grad_from, double h) {
    const double h2 = h * h;
    double s = 0.0;
    for (std::size_t j = 0; j < from.x.size(); ++j) {
        const double d = to.x[j] - from.x[j] - 0.5 * h2 * grad_from[j];
        s += d * d;
    }
    const double d = to.t - from.t - 0.5 * h2 * grad_from.back();
    s += d * d;
    return -s / (2.0 * h2);
}

}  // namespace

SampleBatch run_chain(const MeasureSpec& spec, const GroupParams& params, const SamplerConfig& cfg,
                      int chain_index) {
    spec.validate();
    cfg.validate();
    const bool mala = cfg.algorithm == Algorithm::LangevinAdjusted;
    const double target = cfg.target_acceptance > 0.0 ? cfg.target_acceptance : (mala ? 0.574 : 0.25);
    auto rng = make_rng(cfg.seed, static_cast<std::uint64_t>(chain_index));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Point cur = sample_box(rng, params, 1.0, 1e-3);
    double cur_ld = log_density(spec, cur, params);
    std::vector<double> cur_grad;
    if (mala) cur_grad = grad_log_density(spec, cur, params);

    SampleBatch out;
    out.chain_index = chain_index;
    const std::size_t keep = cfg.n_steps - cfg.burn_in;
    out.points.reserve(keep);
    out.log_densities.reserve(keep);
    double log_step = std::log(cfg.step);

    Point prop = cur;
    for (std::size_t it = 0; it < cfg.n_steps; ++it) {
        const double h = std::exp(log_step);
        for (std::size_t j = 0; j < cur.x.size(); ++j) {
            prop.x[j] = cur.x[j] + (mala ? 0.5 * h * h * cur_grad[j] : 0.0) + h * gauss(rng);
        }
        prop.t = cur.t + (mala ? 0.5 * h * h * cur_grad.back() : 0.0) + h * gauss(rng);
        const double u = unif(rng);

        double accept_prob = 0.0;
        double prop_ld = -std::numeric_limits<double>::infinity();
        std::vector<double> prop_grad;
        if (!(mala && x_norm(prop) < kCenterLine)) {
            prop_ld = log_density(spec, prop, params);
            double log_ratio = prop_ld - cur_ld;
            if (mala && std::isfinite(prop_ld)) {
                prop_grad = grad_log_density(spec, prop, params);
                log_ratio += langevin_log_q(cur, prop, prop_grad, h) - langevin_log_q(prop, cur, cur_grad, h);
            }
            if (std::isnan(log_ratio)) log_ratio = -std::numeric_limits<double>::infinity();
            accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
        }
        const bool accepted = u < accept_prob;
        if (accepted) {
            cur = prop;
            cur_ld = prop_ld;
            if (mala) cur_grad = std::move(prop_grad);
        }
        if (it < cfg.burn_in) {
            if (cfg.tune) log_step += (accept_prob - target) / std::pow(1.0 + it, 0.6);
        } else {
            ++out.proposed;
            if (accepted) ++out.accepted;
            out.points.push_back(cur);
            out.log_densities.push_back(cur_ld);
        }
    }
    out.step = std::exp(log_step);
    out.acceptance_rate = out.proposed ? static_cast<double>(out.accepted) / out.proposed : 0.0;
    out.mis_tuned = out.acceptance_rate < 0.02 || out.acceptance_rate > 0.98;
    return out;
}

std::vector<SampleBatch> run_chains(const MeasureSpec& spec, const GroupParams& params, const SamplerConfig& cfg,
                                    unsigned threads) {
    cfg.validate();
    std::vector<SampleBatch> out(static_cast<std::size_t>(cfg.n_chains));
    parallel_for_chunks(out.size(), 1, threads, [&](std::size_t c, std::size_t, std::size_t) {
        out[c] = run_chain(spec, params, cfg, static_cast<int>(c));
    });
    return out;
}

MeanEstimate batch_means(const std::vector<double>& series, int batches) {
    if (batches < 2) throw ConfigError("batch_means: need >= 2 batches");
    const std::size_t len = series.size() / static_cast<std::size_t>(batches);
    if (len == 0) throw ConfigError("batch_means: series shorter than the batch count");
    std::vector<double> means(static_cast<std::size_t>(batches), 0.0);
    for (int b = 0; b < batches; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += series[b * len + i];
        means[b] = s / static_cast<double>(len);
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= batches;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= (batches - 1);
    return {mean, std::sqrt(var / batches)};
}

void write_samples_csv(std::ostream& os, const SampleBatch& batch, const GroupParams& params) {
    const std::size_t dim = params.horizontal_dim();
    for (std::size_t j = 0; j < dim; ++j) os << "x_" << (j + 1) << ',';
    os << "t,logdens\n";
    os.precision(17);
    for (std::size_t i = 0; i < batch.points.size(); ++i) {
        for (double v : batch.points[i].x) os << v << ',';
        os << batch.points[i].t << ',' << batch.log_densities[i] << '\n';
    }
}

}  // namespace heis
