#pragma once

#include <cstddef>
#include <vector>

#include "heis/group.hpp"

namespace heis {

/// Structure-of-arrays point set: coordinate j of point i is x[j * count + i].
class PointCloud {
public:
    PointCloud(const GroupParams& params, std::size_t count);

    const GroupParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return count_; }

    double* column(std::size_t j) noexcept { return x_.data() + j * count_; }
    const double* column(std::size_t j) const noexcept { return x_.data() + j * count_; }
    double* t() noexcept { return t_.data(); }
    const double* t() const noexcept { return t_.data(); }

    Point point(std::size_t i) const;
    void set_point(std::size_t i, const Point& p);

private:
    GroupParams params_;
    std::size_t count_;
    std::vector<double> x_;
    std::vector<double> t_;
};

/// Batch outputs of the norm kernel, same layout as PointCloud.
struct NormBatch {
    std::vector<double> N;
    std::vector<double> dN_dt;
    std::vector<double> dN_dx;  // d N / d x_j of point i at [j * count + i]
    std::vector<double> grad_norm_sq;
    std::vector<double> x_dot_grad;
    std::vector<double> x_norm_sq;

    void resize(const GroupParams& params, std::size_t count);
};

}  // namespace heis
