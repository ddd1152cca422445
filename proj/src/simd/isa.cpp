#include "heis/simd/isa.hpp"

#include <string>

#include "heis/errors.hpp"
#include "heis/simd/norm_batch.hpp"

namespace heis::simd {

bool available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if defined(HEIS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

Isa best_isa() noexcept {
    static const Isa best = available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
    return best;
}

const char* isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
    }
    return "unknown";
}

void norm_batch(const PointCloud& cloud, std::size_t begin, std::size_t end, NormBatch& out,
                Isa isa) {
    if (end > cloud.size() || begin > end) throw DimensionError("norm_batch: bad range");
    if (out.N.size() != cloud.size()) throw DimensionError("norm_batch: output not sized");
    if (!available(isa)) throw ConfigError(std::string("kernel variant unavailable: ") + isa_name(isa));
    switch (isa) {
        case Isa::Scalar:
            norm_batch_scalar(cloud, begin, end, out);
            return;
        case Isa::Avx2:
#if defined(HEIS_HAVE_AVX2)
            norm_batch_avx2(cloud, begin, end, out);
#endif
            return;
    }
}

void norm_batch(const PointCloud& cloud, NormBatch& out) {
    out.resize(cloud.params(), cloud.size());
    norm_batch(cloud, 0, cloud.size(), out, best_isa());
}

}  // namespace heis::simd
