#pragma once

// Pointwise bounds on N and its derivatives, checked over seeded point
// clouds, and the constant arithmetic behind the U-bound.
//
// Every margin is made dilation invariant before comparison (multiplied by
// N / |x|^2, N^2 / |x|^2 or N / |x_j| as appropriate), so one absolute
// tolerance applies at every scale. A bound holds when margin >= -tolerance.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heis/group.hpp"

namespace heis {

struct InequalityReport {
    std::string name;
    std::size_t n_points = 0;
    double min_margin = 0.0;
    double max_margin = 0.0;
    Point worst_point;
    /// For one-dimensional grid checks (N values) in place of worst_point.
    std::optional<double> worst_grid_value;
    double tolerance = 1e-12;
    bool pass = false;
    std::uint64_t seed = 0;
};

struct CloudSpec {
    std::size_t n_points = 100000;
    std::uint64_t seed = 0;
    /// Even-indexed points: uniform in [-w, w]^{2n+1}.
    double box_half_width = 5.0;
    /// Odd-indexed points: unit box dilated by 10^U, U uniform in [lo, hi].
    double log10_min = -2.0;
    double log10_max = 2.0;
    /// Points with |x| below this (before any dilation) are redrawn.
    double min_x_norm = 1e-3;
    double tolerance = 1e-12;
    unsigned threads = 1;
    std::size_t chunk = 65536;
};

/// Generates the cloud for `spec` (chunk c uses RNG stream c).
std::vector<Point> make_cloud(const GroupParams& params, const CloudSpec& spec);

/// Three reports, in order:
///   "x_dot_grad_lower":  N x.grad N / |x|^2 + 1/(4n)
///   "grad_norm_lower":   N^2 |grad N|^2 / |x|^2 - 2^{-5-2/n}
///   "grad_norm_upper":   (2n+1)^2 / (8 n^2) - N^2 |grad N|^2 / |x|^2
std::vector<InequalityReport> check_gradient_bounds(const GroupParams& params, const CloudSpec& spec);

/// Reports (j in P = {1, n+1}, j in O = the other indices):
///   "pair_radial_sign"     j in P: N x_j dN/dx_j / x_j^2
///   "pair_partial_upper"   j in P: 1/2 - N |dN/dx_j| / |x_j|
///   "other_radial_lower"   j in O: N x_j dN/dx_j / x_j^2 + 1/(4n)
///   "other_combined_lower" j in O: N (|dN/dx_j| + |x_j| |dN/dt|) / |x_j| - (2n-1) / (2^{2+1/n} n)
///   "pair_combined_lower"  j in P: N (|dN/dx_j| + |x_j|/2 |dN/dt|) / |x_j| - 2^{-2-1/n}
///   "other_partial_upper"  j in O: (2n+1)/(4n) - N |dN/dx_j| / |x_j|
///   "time_partial_upper"          (2n+1)/(4n) - N |dN/dt|
std::vector<InequalityReport> check_intermediate_bounds(const GroupParams& params, const CloudSpec& spec);

/// max over a t = 0 slice of 2 N |dN/dx_1| / |x_1| (the ratio to the
/// pair_partial_upper bound); x = cos(theta) e_1 + sin(theta) e_2 for
/// `samples` theta values in (0, pi/2).
double pair_partial_ratio_max_t0(const GroupParams& params, int samples);

/// 1 - 2^{3+2/n} (2n+1)/n^2 * sqrt(n+1) / (n-1)^{3/2}; positive iff the
/// U-bound constant argument closes.
double constant_margin(int n);

/// (2n+1) / (4 n sqrt(n^2 - 1)), the maximiser of ubound_f over alpha > 0.
double alpha_opt(int n);

/// 2^{-5-2/n} - alpha/(2n) - (2n+1)^2 / (alpha 2^5 n^3 (n-1)^2) - alpha/(n(n-1)).
double ubound_f(double alpha, int n);

struct ConstantsRow {
    int n = 0;
    double margin = 0.0;
    double alpha = 0.0;
    double f_at_alpha = 0.0;
};

std::vector<ConstantsRow> constants_table(int n_min, int n_max);

}  // namespace heis
