#include "weilmass/gsp4/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define WEILMASS_HAVE_X86 1
#endif

namespace weilmass::gsp4::kernels {

#ifdef WEILMASS_HAVE_X86

namespace {

__attribute__((target("avx2"))) inline __m256i nibble(__m256i x, int r, int c) {
  return _mm256_and_si256(_mm256_srli_epi64(x, 4 * (4 * r + c)), _mm256_set1_epi64x(0xF));
}

__attribute__((target("avx2"))) inline __m256i mod_small(__m256i x, __m256i magic, __m256i ell) {
  const __m256i q = _mm256_srli_epi64(_mm256_mul_epu32(x, magic), kMagicShift);
  return _mm256_sub_epi64(x, _mm256_mul_epu32(q, ell));
}

}  // namespace

__attribute__((target("avx2"))) void fiber_classes_avx2(std::span<const Packed> in, std::uint32_t ell,
                                                       std::uint32_t m, std::span<std::uint8_t> out) {
  if (out.size() < in.size()) throw Error(ErrorKind::InvalidArgument, "fiber_classes: output too short");
  if (ell > kMaxVectorEll) throw Error(ErrorKind::InvalidArgument, "fiber_classes_avx2: ell too large");
  const std::uint32_t mm = m % ell;
  const std::int64_t e1 = ell - 1;
  // Entries lie in [0, ell); the subtracted part of B is at most e1^2 (1 + 4 e1 + e1^2), and the
  // offset keeps pos - neg nonnegative and below vector_b_bound(ell).
  const std::int64_t neg_max = e1 * e1 * (1 + 4 * e1 + e1 * e1);
  const std::int64_t offset = ((neg_max + ell - 1) / ell) * ell;

  const __m256i vm = _mm256_set1_epi64x(mm);
  const __m256i vm2 = _mm256_set1_epi64x(mm * mm);
  const __m256i vell = _mm256_set1_epi64x(ell);
  const __m256i vmagic = _mm256_set1_epi64x(static_cast<std::int64_t>(magic_multiplier(ell)));
  const __m256i voff = _mm256_set1_epi64x(offset);

  std::size_t i = 0;
  const std::size_t n = in.size();
  alignas(32) std::uint64_t lanes[4];
  for (; i + 4 <= n; i += 4) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in.data() + i));
    const __m256i a00 = nibble(x, 0, 0), a01 = nibble(x, 0, 1), a02 = nibble(x, 0, 2), a03 = nibble(x, 0, 3);
    const __m256i a10 = nibble(x, 1, 0), a11 = nibble(x, 1, 1), a12 = nibble(x, 1, 2), a13 = nibble(x, 1, 3);
    const __m256i a20 = nibble(x, 2, 0), a21 = nibble(x, 2, 1), a22 = nibble(x, 2, 2), a23 = nibble(x, 2, 3);
    const __m256i a30 = nibble(x, 3, 0), a31 = nibble(x, 3, 1), a32 = nibble(x, 3, 2), a33 = nibble(x, 3, 3);

    const __m256i lo_diag = _mm256_add_epi64(a00, a11);
    const __m256i hi_diag = _mm256_add_epi64(a22, a33);
    const __m256i a = _mm256_add_epi64(lo_diag, _mm256_mul_epu32(vm, hi_diag));

    // Positive and negative parts of B kept separate so every product is unsigned.
    const __m256i cross_pos = _mm256_mul_epu32(lo_diag, hi_diag);
    __m256i cross_neg = _mm256_mul_epu32(a02, a20);
    cross_neg = _mm256_add_epi64(cross_neg, _mm256_mul_epu32(a03, a30));
    cross_neg = _mm256_add_epi64(cross_neg, _mm256_mul_epu32(a12, a21));
    cross_neg = _mm256_add_epi64(cross_neg, _mm256_mul_epu32(a13, a31));

    __m256i pos = _mm256_add_epi64(voff, _mm256_mul_epu32(a00, a11));
    pos = _mm256_add_epi64(pos, _mm256_mul_epu32(vm, cross_pos));
    pos = _mm256_add_epi64(pos, _mm256_mul_epu32(vm2, _mm256_mul_epu32(a22, a33)));
    __m256i neg = _mm256_mul_epu32(a01, a10);
    neg = _mm256_add_epi64(neg, _mm256_mul_epu32(vm, cross_neg));
    neg = _mm256_add_epi64(neg, _mm256_mul_epu32(vm2, _mm256_mul_epu32(a23, a32)));

    const __m256i b = mod_small(_mm256_sub_epi64(pos, neg), vmagic, vell);
    const __m256i ar = mod_small(a, vmagic, vell);
    const __m256i cls = _mm256_add_epi64(_mm256_mul_epu32(ar, vell), b);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), cls);
    for (int k = 0; k < 4; ++k) out[i + k] = static_cast<std::uint8_t>(lanes[k]);
  }
  if (i < n) fiber_classes_scalar(in.subspan(i), ell, m, out.subspan(i));
}

#else

void fiber_classes_avx2(std::span<const Packed>, std::uint32_t, std::uint32_t, std::span<std::uint8_t>) {
  throw Error(ErrorKind::InvalidArgument, "AVX2 kernel not built for this architecture");
}

#endif

}  // namespace weilmass::gsp4::kernels
