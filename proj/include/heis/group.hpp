#pragma once

// The anisotropic Heisenberg group H_{2n}(1/2, 1) on R^{2n+1}.
//
// Coordinates are (x_1, ..., x_{2n}, t) with the central coordinate last.
// Documentation uses 1-based indices; storage is 0-based, so x_j lives at
// x[j - 1] and the distinguished pair {x_1, x_{n+1}} is {x[0], x[n]}.
//
// The twist form is c_j(x) = sum_l L_{jl} x_l with the skew matrix
//   L_{1,n+1} = -1/2, L_{n+1,1} = 1/2,
//   L_{j,j+n} = -1 (2 <= j <= n), L_{j,j-n} = 1 (n+2 <= j <= 2n),
// so that X_j = d/dx_j + c_j(x) d/dt and
//   p o q = (x + y, t + s + sum_j c_j(x) y_j).

#include <cstddef>
#include <span>
#include <vector>

namespace heis {

class GroupParams {
public:
    explicit GroupParams(int n);

    int n() const noexcept { return n_; }
    /// Homogeneous dimension 2n + 2.
    int Q() const noexcept { return 2 * n_ + 2; }
    /// Number of horizontal coordinates, 2n.
    std::size_t horizontal_dim() const noexcept { return static_cast<std::size_t>(2 * n_); }

    friend bool operator==(const GroupParams&, const GroupParams&) = default;

private:
    int n_;
};

struct Point {
    std::vector<double> x;
    double t = 0.0;

    Point() = default;
    Point(std::vector<double> horizontal, double central);

    static Point zero(const GroupParams& params);

    /// n inferred from the horizontal length (x.size() / 2).
    int n() const noexcept { return static_cast<int>(x.size() / 2); }
    bool all_finite() const noexcept;
    double horizontal_norm_sq() const noexcept;
    /// max(|x_j|, |t|); used for finite-difference step scaling.
    double max_abs() const noexcept;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Dense 2n x 2n skew matrix of twist coefficients, row-major.
class SkewForm {
public:
    explicit SkewForm(const GroupParams& params);

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t j, std::size_t l) const noexcept { return data_[j * dim_ + l]; }

    /// sum_j sum_l L_{jl} x_l x_j, accumulated as pairs (j,l),(l,j) so the
    /// cancellation is exact in floating point.
    double quadratic_form(std::span<const double> x) const;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

/// Throws DimensionError when the point's horizontal length is not 2n.
void require_dimension(const Point& p, const GroupParams& params);

Point compose(const Point& p, const Point& q, const GroupParams& params);
Point inverse(const Point& p);
/// delta_lambda: x -> lambda x, t -> lambda^2 t. Throws ConfigError for lambda <= 0.
Point dilate(double lambda, const Point& p);

/// c_j(x) for j = 1..2n.
std::vector<double> field_coefficients(const Point& p, const GroupParams& params);
void field_coefficients(std::span<const double> x, int n, std::span<double> out);

/// (X_j u)_j from the Euclidean gradient (d_{x_1}u, ..., d_{x_2n}u, d_t u).
std::vector<double> horizontal_apply(std::span<const double> euclidean_grad, const Point& p,
                                     const GroupParams& params);

}  // namespace heis
