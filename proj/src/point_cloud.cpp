#include "heis/point_cloud.hpp"

#include "heis/errors.hpp"

namespace heis {

PointCloud::PointCloud(const GroupParams& params, std::size_t count)
    : params_(params), count_(count), x_(params.horizontal_dim() * count, 0.0), t_(count, 0.0) {}

Point PointCloud::point(std::size_t i) const {
    if (i >= count_) throw DimensionError("PointCloud::point: index out of range");
    Point p;
    p.x.resize(params_.horizontal_dim());
    for (std::size_t j = 0; j < p.x.size(); ++j) p.x[j] = x_[j * count_ + i];
    p.t = t_[i];
    return p;
}

void PointCloud::set_point(std::size_t i, const Point& p) {
    if (i >= count_) throw DimensionError("PointCloud::set_point: index out of range");
    require_dimension(p, params_);
    for (std::size_t j = 0; j < p.x.size(); ++j) x_[j * count_ + i] = p.x[j];
    t_[i] = p.t;
}

void NormBatch::resize(const GroupParams& params, std::size_t count) {
    N.assign(count, 0.0);
    dN_dt.assign(count, 0.0);
    dN_dx.assign(params.horizontal_dim() * count, 0.0);
    grad_norm_sq.assign(count, 0.0);
    x_dot_grad.assign(count, 0.0);
    x_norm_sq.assign(count, 0.0);
}

}  // namespace heis
