#pragma once

// Fiber sweep kernels. For a packed Sp4 element g and multiplier m, the element
// diag(1,1,m,m) g has characteristic polynomial T^4 - A T^3 + B T^2 - m A T + m^2,
// so (A, B) mod ell identifies it. Kernels write the class index A * ell + B.

#include <cstdint>
#include <span>
#include <string>

#include "weilmass/gsp4/matrix.hpp"

namespace weilmass::gsp4::kernels {

enum class Isa { Scalar, Avx2 };

std::string to_string(Isa isa);

/// Largest ell the vector kernels accept; larger moduli fall back to scalar.
inline constexpr std::uint32_t kMaxVectorEll = 7;

/// Division-free reduction used by the vector kernels: floor(x / ell) equals
/// (x * magic_multiplier(ell)) >> kMagicShift for every x < kMagicRange and ell <= 8.
inline constexpr int kMagicShift = 16;
inline constexpr std::uint64_t kMagicRange = std::uint64_t{1} << 13;
constexpr std::uint64_t magic_multiplier(std::uint32_t ell) { return ((std::uint64_t{1} << kMagicShift) + ell - 1) / ell; }

/// Largest unreduced B value the vector kernels form (offset included) for a given ell.
constexpr std::uint64_t vector_b_bound(std::uint32_t ell) {
  const std::uint64_t e1 = ell - 1;
  const std::uint64_t neg_max = e1 * e1 * (1 + 4 * e1 + e1 * e1);
  const std::uint64_t offset = (neg_max + ell - 1) / ell * ell;
  return offset + e1 * e1 + e1 * (2 * e1) * (2 * e1) + e1 * e1 * e1 * e1;
}
static_assert(vector_b_bound(kMaxVectorEll) < kMagicRange);

void fiber_classes_scalar(std::span<const Packed> in, std::uint32_t ell, std::uint32_t m, std::span<std::uint8_t> out);

/// Only callable when avx2_available() holds.
void fiber_classes_avx2(std::span<const Packed> in, std::uint32_t ell, std::uint32_t m, std::span<std::uint8_t> out);

bool avx2_available();

/// Best ISA on this CPU. WEIL_MASS_SIMD=scalar forces the scalar kernel.
Isa detect_isa();

/// Dispatches to the requested ISA, degrading to scalar when it is unavailable or ell is too large.
void fiber_classes(std::span<const Packed> in, std::uint32_t ell, std::uint32_t m, std::span<std::uint8_t> out,
                   Isa isa = detect_isa());

}  // namespace weilmass::gsp4::kernels
