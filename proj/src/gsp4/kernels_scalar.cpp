#include <cstdlib>
#include <cstring>

#include "weilmass/gsp4/kernels.hpp"

namespace weilmass::gsp4::kernels {

std::string to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void fiber_classes_scalar(std::span<const Packed> in, std::uint32_t ell, std::uint32_t m, std::span<std::uint8_t> out) {
  if (out.size() < in.size()) throw Error(ErrorKind::InvalidArgument, "fiber_classes: output too short");
  if (ell * ell > 256) throw Error(ErrorKind::InvalidArgument, "fiber_classes: ell^2 must fit a byte");
  const std::int64_t l = ell;
  const std::int64_t mm = m % ell;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Packed x = in[i];
    auto at = [x](int r, int c) { return static_cast<std::int64_t>((x >> (4 * (4 * r + c))) & 0xF); };
    // Rows 2 and 3 carry the factor m; minors straddling the halves pick up m, the lower one m^2.
    const std::int64_t a = at(0, 0) + at(1, 1) + mm * (at(2, 2) + at(3, 3));
    const std::int64_t upper = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    const std::int64_t cross = at(0, 0) * at(2, 2) - at(0, 2) * at(2, 0) + at(0, 0) * at(3, 3) - at(0, 3) * at(3, 0) +
                               at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1) + at(1, 1) * at(3, 3) - at(1, 3) * at(3, 1);
    const std::int64_t lower = at(2, 2) * at(3, 3) - at(2, 3) * at(3, 2);
    std::int64_t b = (upper + mm * cross + mm * mm * lower) % l;
    if (b < 0) b += l;
    out[i] = static_cast<std::uint8_t>((a % l) * l + b);
  }
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Isa detect_isa() {
  if (const char* env = std::getenv("WEIL_MASS_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::Scalar;
  }
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

void fiber_classes(std::span<const Packed> in, std::uint32_t ell, std::uint32_t m, std::span<std::uint8_t> out,
                   Isa isa) {
  if (isa == Isa::Avx2 && avx2_available() && ell <= kMaxVectorEll) {
    fiber_classes_avx2(in, ell, m, out);
    return;
  }
  fiber_classes_scalar(in, ell, m, out);
}

}  // namespace weilmass::gsp4::kernels
