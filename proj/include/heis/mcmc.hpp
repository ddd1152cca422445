#pragma once

// Metropolis samplers for exp(-g(N)) on R^{2n+1} and batch-means error bars.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "heis/group.hpp"
#include "heis/measures.hpp"

namespace heis {

enum class Algorithm {
    RandomWalkMetropolis,  // isotropic Gaussian proposals
    LangevinAdjusted,      // MALA; proposals within 1e-8 of the center line are rejected
};

struct SamplerConfig {
    Algorithm algorithm = Algorithm::RandomWalkMetropolis;
    double step = 0.5;                 // initial proposal scale
    std::size_t n_steps = 110000;      // total iterations, burn-in included
    std::size_t burn_in = 10000;       // discarded; the step is tuned during these
    std::uint64_t seed = 0;
    int n_chains = 1;
    bool tune = true;
    /// 0 picks 0.25 (random walk) or 0.574 (Langevin).
    double target_acceptance = 0.0;

    void validate() const;
};

struct SampleBatch {
    std::vector<Point> points;
    std::vector<double> log_densities;
    double acceptance_rate = 0.0;  // over the kept iterations
    std::size_t accepted = 0;
    std::size_t proposed = 0;
    double step = 0.0;             // proposal scale after tuning
    int chain_index = 0;
    /// Acceptance outside [0.02, 0.98] after burn-in.
    bool mis_tuned = false;
};

/// One chain; RNG stream (seed, chain_index). Deterministic in its inputs.
SampleBatch run_chain(const MeasureSpec& spec, const GroupParams& params, const SamplerConfig& cfg,
                      int chain_index);

/// cfg.n_chains chains, concurrently; result ordered by chain index.
std::vector<SampleBatch> run_chains(const MeasureSpec& spec, const GroupParams& params, const SamplerConfig& cfg,
                                    unsigned threads = 1);

struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;  // batch-means standard error
};

/// Mean and batch-means standard error with `batches` equal batches
/// (trailing remainder dropped).
MeanEstimate batch_means(const std::vector<double>& series, int batches = 50);

/// CSV with header x_1..x_{2n},t,logdens.
void write_samples_csv(std::ostream& os, const SampleBatch& batch, const GroupParams& params);

}  // namespace heis
