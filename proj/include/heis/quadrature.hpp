#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals and on
// [0, inf) via a split point and the tail substitution u = 1/v.

#include <functional>

namespace heis {

struct QuadratureConfig {
    double rel_tol = 1e-13;
    double abs_tol = 0.0;
    int max_subdivisions = 4000;
    /// [0, split_point] is integrated directly, [split_point, inf) after u = 1/v.
    double split_point = 1.0;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    int intervals = 0;    // subintervals used
};

using RealFunction = std::function<double(double)>;

/// Throws QuadratureError when the tolerance is not met within
/// max_subdivisions, or when the integrand returns a non-finite value.
QuadResult integrate(const RealFunction& f, double a, double b, const QuadratureConfig& cfg);

/// Integral over [0, inf). `tail(v)` must equal f(1/v) / v^2 on (0, 1/split];
/// pass an empty function to have it formed from f.
QuadResult integrate_half_line(const RealFunction& f, const RealFunction& tail,
                               const QuadratureConfig& cfg);

}  // namespace heis
