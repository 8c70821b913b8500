#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "weilmass/fppoly.hpp"

namespace weilmass::gsp4 {

/// Dense 4x4 matrix over F_ell, row-major, entries in [0, ell).
class Mat4 {
 public:
  Mat4() = default;
  explicit Mat4(std::uint32_t ell);

  static Mat4 identity(std::uint32_t ell);
  static Mat4 diag(std::uint32_t ell, std::int64_t d0, std::int64_t d1, std::int64_t d2, std::int64_t d3);
  /// Entries are reduced modulo ell, negatives included.
  static Mat4 from_rows(std::uint32_t ell, const std::array<std::int64_t, 16>& entries);
  /// [[A, B], [C, D]] from row-major 2x2 blocks.
  static Mat4 from_blocks(std::uint32_t ell, const std::array<std::int64_t, 4>& a, const std::array<std::int64_t, 4>& b,
                          const std::array<std::int64_t, 4>& c, const std::array<std::int64_t, 4>& d);

  std::uint32_t ell() const noexcept { return ell_; }
  std::uint32_t operator()(int r, int c) const noexcept { return e_[4 * r + c]; }
  void set(int r, int c, std::int64_t v);
  const std::array<std::uint32_t, 16>& entries() const noexcept { return e_; }

  Mat4 operator*(const Mat4& o) const;
  Mat4 operator+(const Mat4& o) const;
  Mat4 operator-(const Mat4& o) const;
  Mat4 scaled(std::uint32_t k) const;
  Mat4 transpose() const;
  bool is_zero() const noexcept;
  std::uint32_t trace() const noexcept;

  friend bool operator==(const Mat4&, const Mat4&) = default;

 private:
  std::uint32_t ell_ = 2;
  std::array<std::uint32_t, 16> e_{};
};

/// J = [[0, 1], [-1, 0]] in 2x2 blocks.
Mat4 standard_j(std::uint32_t ell);

std::uint32_t determinant(const Mat4& m);
std::optional<Mat4> inverse(const Mat4& m);

/// m with g^T J g = m J and m != 0, or nullopt when g is not a similitude.
std::optional<std::uint32_t> multiplier(const Mat4& g);

/// Monic characteristic polynomial, constant term first, via sums of principal minors.
std::array<std::uint32_t, 5> charpoly(const Mat4& g);
FpPoly charpoly_poly(const Mat4& g);

/// p(g) by Horner evaluation.
Mat4 eval_poly(const FpPoly& p, const Mat4& g);

/// Minimal polynomial equals characteristic polynomial: I, g, g^2, g^3 are independent.
bool is_cyclic(const Mat4& g);

/// Rank over F_ell of a list of row vectors (all the same length).
std::size_t rank_mod(std::vector<std::vector<std::uint32_t>> rows, std::uint32_t ell);

/// Basis of {x : M x = 0} for M given by rows of length n.
std::vector<std::vector<std::uint32_t>> null_space(std::vector<std::vector<std::uint32_t>> rows, std::size_t n,
                                                   std::uint32_t ell);

/// Packed form: entry (r, c) in the nibble at bit 4(4r + c). Requires ell <= kMaxPackedEll.
using Packed = std::uint64_t;
inline constexpr std::uint32_t kMaxPackedEll = 16;

Packed pack(const Mat4& m);
Mat4 unpack(Packed x, std::uint32_t ell);
Packed mul_packed(Packed x, Packed y, std::uint32_t ell);

/// Scales rows 2 and 3 by s, i.e. left multiplication by diag(1, 1, s, s).
Packed scale_lower_rows(Packed x, std::uint32_t s, std::uint32_t ell);

}  // namespace weilmass::gsp4
