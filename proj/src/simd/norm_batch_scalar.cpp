#include "heis/simd/norm_batch.hpp"

#include "../norm_kernel.hpp"

namespace heis::simd {

void norm_batch_scalar(const PointCloud& cloud, std::size_t begin, std::size_t end,
                       NormBatch& out) {
    const std::size_t count = cloud.size();
    const int n = cloud.params().n();
    for (std::size_t i = begin; i < end; ++i) {
        const auto o = detail::eval_full(
            [&](std::size_t j) { return cloud.column(j)[i]; }, cloud.t()[i], n,
            [&](std::size_t j, double v) { out.dN_dx[j * count + i] = v; });
        out.N[i] = o.N;
        out.dN_dt[i] = o.dN_dt;
        out.grad_norm_sq[i] = o.grad_norm_sq;
        out.x_dot_grad[i] = o.x_dot_grad;
        out.x_norm_sq[i] = o.x_norm_sq;
    }
}

}  // namespace heis::simd
