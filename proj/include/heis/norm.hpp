#pragma once

// Closed-form homogeneous norm N(x, t) and its exact first derivatives.
//
//   A = (x_1^2 + x_{n+1}^2)/2 + S/2,   B = (x_1^2 + x_{n+1}^2)/4 + S/2,
//   S = sum of x_j^2 over j not in {1, n+1},
//   N = (B^2+t^2)^{1/4n} (AB + t^2 + A sqrt(B^2+t^2))^{1/2 - 1/4n} / (B + sqrt(B^2+t^2))^{1/2}.
//
// Evaluation is done on the dilated point delta_{1/s} p with s a power of two
// chosen so the rescaled coordinates are O(1); N scales by s exactly, the
// x-partials are dilation invariant and d_t N scales by 1/s. With
// r = sqrt(B^2+t^2), W = AB + t^2 + A r and K = W / r^2 (degree 0) the norm is
// N = r K^{(2n-1)/4n} / sqrt(B + r), which stays finite on the center line.

#include <vector>

#include "heis/group.hpp"

namespace heis {

struct ABPair {
    double A = 0.0;
    double B = 0.0;
};

struct NormEval {
    double A = 0.0;
    double B = 0.0;
    double N = 0.0;
    std::vector<double> dN_dx;       // d N / d x_j
    double dN_dt = 0.0;
    std::vector<double> horiz_grad;  // X_j N
    double grad_norm_sq = 0.0;       // |grad N|^2 = sum (X_j N)^2
    double x_dot_grad = 0.0;         // sum x_j X_j N = sum x_j dN/dx_j
};

ABPair ab_quantities(const Point& p, const GroupParams& params);

/// N(p); 0 at the origin.
double norm_N(const Point& p, const GroupParams& params);

/// All NormEval fields. Throws SingularPointError when x = 0.
NormEval exact_partials(const Point& p, const GroupParams& params);

/// sum_j x_j X_j N. Throws SingularPointError when x = 0.
double x_dot_grad(const Point& p, const GroupParams& params);

}  // namespace heis
