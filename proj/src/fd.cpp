#include "heis/fd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "heis/errors.hpp"
#include "heis/norm.hpp"
#include "heis/parallel.hpp"
#include "heis/sampling.hpp"

namespace heis {

namespace {

double eval_checked(const ScalarField& u, const Point& p) {
    const double v = u(p);
    if (!std::isfinite(v)) throw StencilError("finite difference: non-finite field value in stencil");
    return v;
}

void check_step(double h, const Point& p) {
    if (!(h > 0.0) || !std::isfinite(h)) throw StencilError("finite difference: invalid step");
    if (h <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + p.max_abs())) {
        throw StencilError("finite difference: step underflows against the point scale");
    }
}

Point shifted(const Point& p, std::size_t j, double dx, double dt) {
    Point q = p;
    if (j < q.x.size()) q.x[j] += dx;
    q.t += dt;
    return q;
}

bool on_center_line(const Point& p) {
    for (double v : p.x) {
        if (v != 0.0) return false;
    }
    return true;
}

}  // namespace

void FdConfig::validate() const {
    if (!(h_base > 0.0) || !(h_first > 0.0)) throw ConfigError("FdConfig: steps must be > 0");
}

double FdConfig::second_step(const Point& p) const {
    return scale_mode == StepScale::Relative ? h_base * (1.0 + p.max_abs()) : h_base;
}

double FdConfig::first_step(const Point& p) const {
    return scale_mode == StepScale::Relative ? h_first * (1.0 + p.max_abs()) : h_first;
}

std::vector<double> fd_gradient(const ScalarField& u, const Point& p, double h) {
    check_step(h, p);
    const std::size_t dim = p.x.size();
    std::vector<double> g(dim + 1);
    for (std::size_t j = 0; j <= dim; ++j) {
        const double dx = j < dim ? h : 0.0;
        const double dt = j < dim ? 0.0 : h;
        const double fp = eval_checked(u, shifted(p, j, dx, dt));
        const double fm = eval_checked(u, shifted(p, j, -dx, -dt));
        g[j] = (fp - fm) / (2.0 * h);
    }
    return g;
}

double sub_laplacian_step(const ScalarField& u, const Point& p, const GroupParams& params, double h,
                          Stencil stencil) {
    require_dimension(p, params);
    check_step(h, p);
    const std::vector<double> c = field_coefficients(p, params);
    const std::size_t dim = p.x.size();
    const double f0 = eval_checked(u, p);
    const double h2 = h * h;
    double sum = 0.0;
    if (stencil == Stencil::Flow) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double fp = eval_checked(u, shifted(p, j, h, h * c[j]));
            const double fm = eval_checked(u, shifted(p, j, -h, -h * c[j]));
            sum += (fp - 2.0 * f0 + fm) / h2;
        }
        return sum;
    }
    const double ftp = eval_checked(u, shifted(p, dim, 0.0, h));
    const double ftm = eval_checked(u, shifted(p, dim, 0.0, -h));
    const double dtt = (ftp - 2.0 * f0 + ftm) / h2;
    for (std::size_t j = 0; j < dim; ++j) {
        const double fp = eval_checked(u, shifted(p, j, h, 0.0));
        const double fm = eval_checked(u, shifted(p, j, -h, 0.0));
        const double djj = (fp - 2.0 * f0 + fm) / h2;
        double djt = 0.0;
        if (c[j] != 0.0) {
            const double fpp = eval_checked(u, shifted(p, j, h, h));
            const double fpm = eval_checked(u, shifted(p, j, h, -h));
            const double fmp = eval_checked(u, shifted(p, j, -h, h));
            const double fmm = eval_checked(u, shifted(p, j, -h, -h));
            djt = (fpp - fpm - fmp + fmm) / (4.0 * h2);
        }
        sum += djj + 2.0 * c[j] * djt + c[j] * c[j] * dtt;
    }
    return sum;
}

double sub_laplacian(const ScalarField& u, const Point& p, const GroupParams& params, const FdConfig& cfg) {
    cfg.validate();
    const double h = cfg.second_step(p);
    const double d = sub_laplacian_step(u, p, params, h, cfg.stencil);
    if (!cfg.richardson) return d;
    const double d2 = sub_laplacian_step(u, p, params, 0.5 * h, cfg.stencil);
    return (4.0 * d2 - d) / 3.0;
}

namespace {

ScalarField fundamental_field(const GroupParams& params) {
    const double expo = 2.0 - params.Q();
    return [params, expo](const Point& q) { return std::pow(norm_N(q, params), expo); };
}

}  // namespace

double harmonicity_residual(const Point& p, const GroupParams& params, const FdConfig& cfg) {
    require_dimension(p, params);
    if (on_center_line(p)) throw SingularPointError("harmonicity_residual: x = 0");
    return sub_laplacian(fundamental_field(params), p, params, cfg);
}

HarmonicitySweep harmonicity_sweep(const Point& p, const GroupParams& params, double h0, int levels) {
    require_dimension(p, params);
    if (on_center_line(p)) throw SingularPointError("harmonicity_sweep: x = 0");
    if (levels < 2) throw ConfigError("harmonicity_sweep: need at least two levels");
    const ScalarField u = fundamental_field(params);
    const double N = norm_N(p, params);
    HarmonicitySweep s;
    s.scale = std::pow(N, -static_cast<double>(params.Q()));
    std::vector<double> raw;
    double h = h0 * N;
    for (int k = 0; k < levels; ++k, h *= 0.5) {
        const double d = sub_laplacian_step(u, p, params, h, Stencil::Flow);
        s.steps.push_back(h);
        raw.push_back(d);
        s.residuals.push_back(std::abs(d));
    }
    double mx = 0.0, my = 0.0;
    for (int k = 0; k < levels; ++k) {
        mx += std::log(s.steps[k]);
        my += std::log(s.residuals[k]);
    }
    mx /= levels;
    my /= levels;
    double sxy = 0.0, sxx = 0.0;
    for (int k = 0; k < levels; ++k) {
        const double dx = std::log(s.steps[k]) - mx;
        sxy += dx * (std::log(s.residuals[k]) - my);
        sxx += dx * dx;
    }
    s.slope = sxy / sxx;
    const double fine = raw[levels - 1];
    const double coarse = raw[levels - 2];
    s.richardson = (4.0 * fine - coarse) / 3.0;
    s.truncation_estimate = std::abs(fine - coarse);
    return s;
}

InfinityLaplacian infinity_laplacian(const ScalarField& grad_norm_sq, std::span<const double> horiz_grad,
                                     const Point& p, const GroupParams& params, const FdConfig& cfg,
                                     TwistMode mode) {
    require_dimension(p, params);
    cfg.validate();
    const std::size_t dim = params.horizontal_dim();
    if (horiz_grad.size() != dim) throw DimensionError("infinity_laplacian: gradient length mismatch");
    std::vector<double> c(dim, 0.0);
    if (mode == TwistMode::Group) c = field_coefficients(p, params);

    auto contract = [&](double h) {
        const std::vector<double> eg = fd_gradient(grad_norm_sq, p, h);
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += (eg[j] + c[j] * eg[dim]) * horiz_grad[j];
        return 0.5 * acc;
    };
    const double h = cfg.first_step(p);
    InfinityLaplacian out;
    out.value = contract(h);
    const double coarse = contract(2.0 * h);
    double gsum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) gsum += std::abs(horiz_grad[j]) * (1.0 + std::abs(c[j]));
    const double g0 = std::abs(grad_norm_sq(p));
    out.noise_floor = std::abs(out.value - coarse) +
                      std::numeric_limits<double>::epsilon() * g0 / h * gsum;
    return out;
}

InfinityLaplacian infinity_laplacian_N(const Point& p, const GroupParams& params, const FdConfig& cfg) {
    require_dimension(p, params);
    if (on_center_line(p)) throw SingularPointError("infinity_laplacian_N: x = 0");
    const NormEval e = exact_partials(p, params);
    const ScalarField g = [params](const Point& q) { return exact_partials(q, params).grad_norm_sq; };
    return infinity_laplacian(g, e.horiz_grad, p, params, cfg, TwistMode::Group);
}

}  // namespace heis

namespace heis {

Point generic_witness_point(const GroupParams& params) {
    Point p = Point::zero(params);
    p.x[0] = 1.0;
    p.x[1] = 1.0;
    p.t = 0.3;
    return p;
}

HarmonicityCheck check_harmonicity(const GroupParams& params, std::size_t points, std::uint64_t seed, double N_min,
                                   double N_max, double slope_tol, unsigned threads) {
    if (points == 0 || !(N_min > 0.0) || !(N_max >= N_min)) {
        throw ConfigError("check_harmonicity: need points > 0 and 0 < N_min <= N_max");
    }
    std::vector<Point> ps(points);
    std::vector<HarmonicitySweep> sw(points);
    parallel_for_chunks(points, 1, threads, [&](std::size_t i, std::size_t, std::size_t) {
        auto rng = make_rng(seed, i);
        std::uniform_real_distribution<double> u(N_min, N_max);
        ps[i] = sample_on_sphere(rng, params, u(rng));
        sw[i] = harmonicity_sweep(ps[i], params);
    });
    HarmonicityCheck r;
    r.points = points;
    r.N_min = N_min;
    r.N_max = N_max;
    r.slope_min = std::numeric_limits<double>::infinity();
    r.slope_max = -r.slope_min;
    double worst = -1.0;
    for (std::size_t i = 0; i < points; ++i) {
        const HarmonicitySweep& s = sw[i];
        const double res = s.residuals.back() / s.truncation_estimate;
        const double ri = std::abs(s.richardson) / s.truncation_estimate;
        r.slope_min = std::min(r.slope_min, s.slope);
        r.slope_max = std::max(r.slope_max, s.slope);
        r.residual_over_truncation = std::max(r.residual_over_truncation, res);
        r.richardson_over_truncation = std::max(r.richardson_over_truncation, ri);
        r.max_scaled_residual = std::max(r.max_scaled_residual, s.residuals.back() / s.scale);
        const bool ok = std::abs(s.slope - 2.0) <= slope_tol && res <= 1.0 && ri <= 1.0;
        if (!ok) ++r.failures;
        const double badness = std::max({std::abs(s.slope - 2.0) / slope_tol, res, ri});
        if (badness > worst) {
            worst = badness;
            r.worst_point = ps[i];
        }
    }
    r.pass = r.failures == 0;
    return r;
}

LaplacianIdentityCheck check_laplacian_identity(const GroupParams& params, std::size_t points, std::uint64_t seed,
                                                double tolerance, unsigned threads) {
    if (points == 0) throw ConfigError("check_laplacian_identity: need points > 0");
    std::vector<Point> ps(points);
    std::vector<double> err(points);
    const ScalarField u = [&params](const Point& q) { return norm_N(q, params); };
    const FdConfig cfg;
    parallel_for_chunks(points, 256, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            auto rng = make_rng(seed, i);
            ps[i] = sample_box(rng, params, 5.0, 1e-3);
            const NormEval ne = exact_partials(ps[i], params);
            const double ratio = sub_laplacian(u, ps[i], params, cfg) * ne.N / ((params.Q() - 1) * ne.grad_norm_sq);
            err[i] = std::abs(ratio - 1.0);
        }
    });
    LaplacianIdentityCheck r;
    r.points = points;
    r.tolerance = tolerance;
    const auto it = std::max_element(err.begin(), err.end());
    r.max_abs_err = *it;
    r.worst_point = ps[static_cast<std::size_t>(it - err.begin())];
    r.pass = r.max_abs_err <= tolerance;
    return r;
}

}  // namespace heis
