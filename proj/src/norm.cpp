#include "heis/norm.hpp"

#include <cmath>

#include "heis/errors.hpp"
#include "norm_kernel.hpp"

namespace heis {

namespace {

bool on_center_line(const Point& p) {
    for (double v : p.x) {
        if (v != 0.0) return false;
    }
    return true;
}

}  // namespace

ABPair ab_quantities(const Point& p, const GroupParams& params) {
    require_dimension(p, params);
    const std::size_t n = static_cast<std::size_t>(params.n());
    const double P = p.x[0] * p.x[0] + p.x[n] * p.x[n];
    double S = 0.0;
    for (std::size_t j = 1; j < 2 * n; ++j) {
        if (j != n) S += p.x[j] * p.x[j];
    }
    return {0.5 * (P + S), 0.25 * P + 0.5 * S};
}

double norm_N(const Point& p, const GroupParams& params) {
    require_dimension(p, params);
    double m = std::sqrt(std::fabs(p.t));
    for (double v : p.x) m = std::fmax(m, std::fabs(v));
    const detail::Scaled sc = detail::pick_scale(m);
    if (sc.s == 0.0) return 0.0;
    const double tt = (p.t * sc.inv_s) * sc.inv_s;
    const auto c = detail::core([&](std::size_t j) { return p.x[j] * sc.inv_s; }, params.n(), tt);
    return c.N * sc.s;
}

NormEval exact_partials(const Point& p, const GroupParams& params) {
    require_dimension(p, params);
    if (on_center_line(p)) {
        throw SingularPointError("exact_partials: x = 0 (center line)");
    }
    NormEval e;
    const ABPair ab = ab_quantities(p, params);
    e.A = ab.A;
    e.B = ab.B;
    e.dN_dx.assign(p.x.size(), 0.0);
    const auto o = detail::eval_full([&](std::size_t j) { return p.x[j]; }, p.t, params.n(),
                                     [&](std::size_t j, double v) { e.dN_dx[j] = v; });
    e.N = o.N;
    e.dN_dt = o.dN_dt;
    std::vector<double> grad(e.dN_dx);
    grad.push_back(e.dN_dt);
    e.horiz_grad = horizontal_apply(grad, p, params);
    e.grad_norm_sq = 0.0;
    for (double h : e.horiz_grad) e.grad_norm_sq += h * h;
    e.x_dot_grad = o.x_dot_grad;
    return e;
}

double x_dot_grad(const Point& p, const GroupParams& params) {
    require_dimension(p, params);
    if (on_center_line(p)) {
        throw SingularPointError("x_dot_grad: x = 0 (center line)");
    }
    const auto o = detail::eval_full([&](std::size_t j) { return p.x[j]; }, p.t, params.n(),
                                     [](std::size_t, double) {});
    return o.x_dot_grad;
}

}  // namespace heis
