#pragma once

// Seeded point generators shared by the checks.

#include <cstdint>
#include <random>

#include "heis/group.hpp"

namespace heis {

/// Independent stream for (seed, stream) via seed_seq.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform in [-half_width, half_width]^{2n+1}, redrawn while |x| < min_x_norm.
Point sample_box(std::mt19937_64& rng, const GroupParams& params, double half_width,
                 double min_x_norm);

/// Uniform on the box, then dilated by 10^U with U uniform in
/// [log10_min, log10_max]; redrawn while |x| < min_x_norm before dilation.
Point sample_log_radial(std::mt19937_64& rng, const GroupParams& params, double log10_min,
                        double log10_max, double min_x_norm);

/// Gaussian direction in R^{2n+1}, then dilated so N equals `target_N`.
/// Redrawn while the horizontal part is below 1e-3 of the N-scale.
Point sample_on_sphere(std::mt19937_64& rng, const GroupParams& params, double target_N);

}  // namespace heis
