#include "heis/group.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heis/errors.hpp"

namespace heis {

GroupParams::GroupParams(int n) : n_(n) {
    if (n < 2) {
        throw ConfigError("group order n must be >= 2, got " + std::to_string(n));
    }
}

Point::Point(std::vector<double> horizontal, double central)
    : x(std::move(horizontal)), t(central) {}

Point Point::zero(const GroupParams& params) {
    return Point(std::vector<double>(params.horizontal_dim(), 0.0), 0.0);
}

bool Point::all_finite() const noexcept {
    return std::isfinite(t) && std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double Point::horizontal_norm_sq() const noexcept {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double Point::max_abs() const noexcept {
    double m = std::abs(t);
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

SkewForm::SkewForm(const GroupParams& params)
    : dim_(params.horizontal_dim()), data_(dim_ * dim_, 0.0) {
    const std::size_t n = static_cast<std::size_t>(params.n());
    auto at = [this](std::size_t j, std::size_t l) -> double& { return data_[j * dim_ + l]; };
    at(0, n) = -0.5;
    at(n, 0) = 0.5;
    for (std::size_t j = 1; j < n; ++j) {
        at(j, j + n) = -1.0;
        at(j + n, j) = 1.0;
    }
}

double SkewForm::quadratic_form(std::span<const double> x) const {
    if (x.size() != dim_) throw DimensionError("SkewForm: length mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        for (std::size_t l = j + 1; l < dim_; ++l) {
            // L_{jl} x_l x_j + L_{lj} x_j x_l, summed as one pair.
            s += (*this)(j, l) * (x[l] * x[j]) + (*this)(l, j) * (x[j] * x[l]);
        }
    }
    return s;
}

void require_dimension(const Point& p, const GroupParams& params) {
    if (p.x.size() != params.horizontal_dim()) {
        throw DimensionError("point has " + std::to_string(p.x.size()) +
                             " horizontal coordinates, expected " +
                             std::to_string(params.horizontal_dim()));
    }
}

void field_coefficients(std::span<const double> x, int n, std::span<double> out) {
    const std::size_t nn = static_cast<std::size_t>(n);
    if (x.size() != 2 * nn || out.size() != 2 * nn) {
        throw DimensionError("field_coefficients: length mismatch");
    }
    out[0] = -0.5 * x[nn];
    out[nn] = 0.5 * x[0];
    for (std::size_t j = 1; j < nn; ++j) {
        out[j] = -x[j + nn];
        out[j + nn] = x[j];
    }
}

std::vector<double> field_coefficients(const Point& p, const GroupParams& params) {
    require_dimension(p, params);
    std::vector<double> c(p.x.size());
    field_coefficients(p.x, params.n(), c);
    return c;
}

Point compose(const Point& p, const Point& q, const GroupParams& params) {
    require_dimension(p, params);
    require_dimension(q, params);
    const std::size_t n = static_cast<std::size_t>(params.n());
    Point r;
    r.x.resize(2 * n);
    for (std::size_t j = 0; j < 2 * n; ++j) r.x[j] = p.x[j] + q.x[j];
    double twist = 0.5 * p.x[0] * q.x[n] - 0.5 * p.x[n] * q.x[0];
    for (std::size_t j = 1; j < n; ++j) {
        twist += p.x[j] * q.x[j + n] - q.x[j] * p.x[j + n];
    }
    r.t = p.t + q.t + twist;
    return r;
}

Point inverse(const Point& p) {
    Point r = p;
    for (double& v : r.x) v = -v;
    r.t = -r.t;
    return r;
}

Point dilate(double lambda, const Point& p) {
    if (!(lambda > 0.0)) throw ConfigError("dilation factor must be positive");
    Point r = p;
    for (double& v : r.x) v *= lambda;
    r.t *= lambda * lambda;
    return r;
}

std::vector<double> horizontal_apply(std::span<const double> euclidean_grad, const Point& p,
                                     const GroupParams& params) {
    require_dimension(p, params);
    const std::size_t dim = params.horizontal_dim();
    if (euclidean_grad.size() != dim + 1) {
        throw DimensionError("horizontal_apply: gradient must have 2n+1 entries");
    }
    std::vector<double> c(dim);
    field_coefficients(p.x, params.n(), c);
    const double dt = euclidean_grad[dim];
    std::vector<double> out(dim);
    for (std::size_t j = 0; j < dim; ++j) out[j] = euclidean_grad[j] + c[j] * dt;
    return out;
}

}  // namespace heis
