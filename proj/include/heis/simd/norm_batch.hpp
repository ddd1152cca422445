#pragma once

#include <cstddef>

#include "heis/point_cloud.hpp"
#include "heis/simd/isa.hpp"

namespace heis::simd {

/// Evaluates N, dN/dt, dN/dx_j, |grad N|^2, x . grad N and |x|^2 for points
/// [begin, end) of the cloud into `out` (already sized for the cloud).
/// Center-line points get the formula's finite limits; the origin gets N = 0
/// and NaN derivatives.
void norm_batch_scalar(const PointCloud& cloud, std::size_t begin, std::size_t end,
                       NormBatch& out);
#if defined(HEIS_HAVE_AVX2)
void norm_batch_avx2(const PointCloud& cloud, std::size_t begin, std::size_t end,
                     NormBatch& out);
#endif

/// Dispatches to `isa`; throws ConfigError if it is not available.
void norm_batch(const PointCloud& cloud, std::size_t begin, std::size_t end, NormBatch& out,
                Isa isa);

/// Whole cloud with the best available variant; resizes `out`.
void norm_batch(const PointCloud& cloud, NormBatch& out);

}  // namespace heis::simd
