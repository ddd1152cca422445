#pragma once

// Finite-difference second-order operators on the group: the sub-Laplacian
// sum_j X_j^2 and the infinity-Laplacian of N, plus the harmonicity residual
// of N^{2-Q}.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "heis/group.hpp"

namespace heis {

enum class StepScale {
    Absolute,  // h = h_base
    Relative,  // h = h_base * (1 + max_abs(p))
};

enum class Stencil {
    /// sum_j [d_jj u + 2 c_j d_jt u + c_j^2 d_tt u]; the mixed term uses the
    /// 4-point cross stencil.
    Expanded,
    /// X_j^2 u as the second difference along the straight line p + s v_j,
    /// v_j = e_j + c_j(x) e_t (the integral curve of X_j, since c_j does not
    /// depend on x_j).
    Flow,
};

struct FdConfig {
    double h_base = 1e-4;      // second differences
    double h_first = 1e-6;     // first differences
    StepScale scale_mode = StepScale::Relative;
    bool richardson = false;   // (4 D(h/2) - D(h)) / 3
    Stencil stencil = Stencil::Expanded;

    void validate() const;
    double second_step(const Point& p) const;
    double first_step(const Point& p) const;
};

using ScalarField = std::function<double(const Point&)>;

/// Central-difference Euclidean gradient (d_{x_1}, ..., d_{x_2n}, d_t) with step h.
std::vector<double> fd_gradient(const ScalarField& u, const Point& p, double h);

/// Sub-Laplacian at p with an explicit step (no Richardson).
double sub_laplacian_step(const ScalarField& u, const Point& p, const GroupParams& params, double h,
                          Stencil stencil);

double sub_laplacian(const ScalarField& u, const Point& p, const GroupParams& params, const FdConfig& cfg);

/// Delta(N^{2-Q}) at p. Throws SingularPointError when x = 0.
double harmonicity_residual(const Point& p, const GroupParams& params, const FdConfig& cfg);

struct HarmonicitySweep {
    std::vector<double> steps;      // h values, halving
    std::vector<double> residuals;  // |Delta_h N^{2-Q}| (plain, no Richardson)
    double slope = 0.0;             // least-squares slope of log|res| vs log h
    double richardson = 0.0;        // Richardson value from the two finest steps
    double truncation_estimate = 0.0;  // |D(h_min) - D(2 h_min)|
    double scale = 0.0;             // N^{-Q}
};

/// Plain-stencil residuals at steps h0 * N(p) * 2^{-k}, k = 0..levels-1, Flow stencil.
HarmonicitySweep harmonicity_sweep(const Point& p, const GroupParams& params, double h0 = 0.02,
                                   int levels = 4);

struct InfinityLaplacian {
    double value = 0.0;
    /// |D(h) - D(2h)| plus a rounding term eps |g| / h sum_j |X_j N|.
    double noise_floor = 0.0;
};

enum class TwistMode {
    Group,    // X_j = d_j + c_j d_t
    Abelian,  // all c_j forced to 0
};

/// 1/2 sum_j X_j(g) * grad_j where g is an exactly evaluated |grad u|^2 field
/// and grad_j = X_j u at p. X_j(g) comes from a central-difference Euclidean
/// gradient of g.
InfinityLaplacian infinity_laplacian(const ScalarField& grad_norm_sq, std::span<const double> horiz_grad,
                                     const Point& p, const GroupParams& params, const FdConfig& cfg,
                                     TwistMode mode = TwistMode::Group);

/// The above for u = N. Throws SingularPointError when x = 0.
InfinityLaplacian infinity_laplacian_N(const Point& p, const GroupParams& params, const FdConfig& cfg);

/// Witness point for Delta_inf N != 0: x_1 = x_2 = 1, other x_j = 0, t = 0.3.
Point generic_witness_point(const GroupParams& params);

struct HarmonicityCheck {
    std::size_t points = 0;
    double N_min = 0.5;
    double N_max = 5.0;
    double slope_min = 0.0;
    double slope_max = 0.0;
    /// max over points of |residual at the finest step| / truncation_estimate
    double residual_over_truncation = 0.0;
    /// max over points of |Richardson value| / truncation_estimate
    double richardson_over_truncation = 0.0;
    /// max over points of |residual at the finest step| / N^{-Q}
    double max_scaled_residual = 0.0;
    std::size_t failures = 0;
    Point worst_point;
    bool pass = false;
};

/// harmonicity_sweep at `points` points with N uniform in [N_min, N_max]
/// (point i from RNG stream (seed, i)). A point passes when the slope is
/// 2 +- slope_tol and both the finest plain residual and the Richardson
/// value are within the truncation estimate.
HarmonicityCheck check_harmonicity(const GroupParams& params, std::size_t points, std::uint64_t seed,
                                   double N_min = 0.5, double N_max = 5.0, double slope_tol = 0.3,
                                   unsigned threads = 1);

struct LaplacianIdentityCheck {
    std::size_t points = 0;
    double max_abs_err = 0.0;  // max |Delta N * N / ((Q-1) |grad N|^2) - 1|
    Point worst_point;
    double tolerance = 1e-5;
    bool pass = false;
};

/// Delta N = (Q-1) |grad N|^2 / N with the default FdConfig at box points
/// (half width 5; point i from RNG stream (seed, i)).
LaplacianIdentityCheck check_laplacian_identity(const GroupParams& params, std::size_t points, std::uint64_t seed,
                                                double tolerance = 1e-5, unsigned threads = 1);

}  // namespace heis
