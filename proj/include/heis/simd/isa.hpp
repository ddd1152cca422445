#pragma once

namespace heis::simd {

enum class Isa { Scalar, Avx2 };

/// True when the variant was compiled in and the running CPU supports it.
bool available(Isa isa) noexcept;

/// Widest available variant.
Isa best_isa() noexcept;

const char* isa_name(Isa isa) noexcept;

}  // namespace heis::simd
