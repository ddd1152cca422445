#pragma once

// End-to-end Monte Carlo verification runs: sample, evaluate the test
// family, fit constants on one chain and recheck them on an independent one.

#include <cstdint>
#include <vector>

#include "heis/coercive.hpp"
#include "heis/inequalities.hpp"
#include "heis/mcmc.hpp"
#include "heis/measures.hpp"

namespace heis {

struct VerifyConfig {
    SamplerConfig sampler;  // n_chains is ignored; chains are set per run
    double z = 3.0;
    int batches = 50;
    bool restrict_exterior = false;
    unsigned threads = 1;
};

struct ChainSummary {
    double acceptance_rate = 0.0;
    double step = 0.0;
    bool mis_tuned = false;
};

struct CoerciveReport {
    std::string kind;  // "ubound" or "lsi"
    MeasureSpec spec;
    std::vector<std::string> functions;
    std::vector<InequalityTerms> fit_terms;    // series cleared
    std::vector<InequalityTerms> check_terms;  // series cleared
    FeasibilityResult fit;    // constants fitted on chain 0
    FeasibilityResult check;  // the same constants on chain 1, z-sigma slack
    /// Pointwise conditions on g over the grid from condition_grid().
    std::vector<InequalityReport> conditions;
    std::vector<ChainSummary> chains;
    bool pass = false;
};

/// N grid for the conditions on g: linear on [1, 10] with 901 points
/// (starting at 1.5 for cosh-power), log on [1, 1e6] with 2000 points for
/// alpha-power.
std::vector<double> condition_grid(const MeasureSpec& spec);

/// U-bound with the default test family. Passes when the check chain is
/// feasible and the curvature condition holds on the grid.
CoerciveReport verify_ubound(const MeasureSpec& spec, const GroupParams& params, const VerifyConfig& cfg);

/// beta-log-Sobolev with the default family (AlphaPowerP only). The grid
/// conditions use c = lsi_min_c and d = lsi_min_d.
CoerciveReport verify_lsi(const MeasureSpec& spec, const GroupParams& params, const VerifyConfig& cfg);

struct PoincareReport {
    MeasureSpec spec;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<PoincareRatio>> ratios;  // per seed
    std::vector<double> max_ratio;                   // per seed
    std::vector<std::string> max_function;
    double max_ratio_mean = 0.0;
    double max_ratio_spread = 0.0;  // max |max_ratio / mean - 1|
    /// For f = x_1: |ratio - empirical Var(x_1)| / ratio SE, worst seed.
    double x1_variance_z = 0.0;
    bool all_finite = false;
    double stability_tolerance = 0.2;
    bool pass = false;
};

/// Ratios on `seeds` independent chains with seeds sampler.seed + i.
PoincareReport verify_poincare(const MeasureSpec& spec, const GroupParams& params, const VerifyConfig& cfg,
                               int seeds = 5);

}  // namespace heis
