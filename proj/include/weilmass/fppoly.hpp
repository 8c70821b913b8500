#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "weilmass/algebra.hpp"

namespace weilmass {

/// Polynomial over F_ell with coefficients stored constant term first.
/// The zero polynomial has an empty coefficient vector.
class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(std::uint64_t ell, std::vector<std::uint64_t> coeffs);

  static FpPoly constant(std::uint64_t ell, std::uint64_t c);
  static FpPoly x(std::uint64_t ell);
  static FpPoly from_signed(std::uint64_t ell, std::span<const std::int64_t> coeffs);

  std::uint64_t modulus() const noexcept { return ell_; }
  const std::vector<std::uint64_t>& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  std::uint64_t coeff(int i) const noexcept { return i < static_cast<int>(c_.size()) ? c_[i] : 0; }
  std::uint64_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  std::uint64_t eval(std::uint64_t x) const;

  FpPoly monic() const;
  FpPoly derivative() const;

  FpPoly operator+(const FpPoly& o) const;
  FpPoly operator-(const FpPoly& o) const;
  FpPoly operator*(const FpPoly& o) const;
  FpPoly operator/(const FpPoly& o) const;
  FpPoly operator%(const FpPoly& o) const;

  friend bool operator==(const FpPoly& a, const FpPoly& b) = default;

  /// Orders by degree, then coefficients from the leading term downward.
  friend bool canonical_less(const FpPoly& a, const FpPoly& b);

  std::string to_string(char var = 'T') const;

 private:
  void trim();
  std::uint64_t ell_ = 2;
  std::vector<std::uint64_t> c_;
};

void divmod(const FpPoly& a, const FpPoly& b, FpPoly& quot, FpPoly& rem);
FpPoly gcd(FpPoly a, FpPoly b);
FpPoly powmod(const FpPoly& base, std::uint64_t exp, const FpPoly& mod);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t ell);

struct FpFactor {
  FpPoly poly;
  unsigned multiplicity = 0;
  friend bool operator==(const FpFactor&, const FpFactor&) = default;
};

/// Largest modulus accepted by factor_mod_ell. Equal-degree splitting of degree-d blocks needs
/// ell^d < 2^64, so beyond 65521 only blocks with d <= 2 (all of them, for quartics) are split.
inline constexpr std::uint64_t kMaxFactorModulus = 4294967291;

/// Complete factorization of a monic polynomial over F_ell: squarefree split,
/// distinct-degree split, then seeded equal-degree splitting (trace map at ell = 2).
/// Factors are monic, pairwise distinct and sorted by canonical_less.
std::vector<FpFactor> factor_mod_ell(const FpPoly& f);

/// Integer-coefficient convenience overload; `coeffs` are constant-term first and the
/// polynomial must be monic.
std::vector<FpFactor> factor_mod_ell(std::span<const std::int64_t> coeffs, std::uint64_t ell);
std::vector<FpFactor> factor_mod_ell(std::span<const BigInt> coeffs, std::uint64_t ell);

/// Rabin irreducibility test: gcd(g, T^{ell^d} - T) = 1 for all d < deg g, and g | T^{ell^deg} - T.
bool is_irreducible(const FpPoly& g);

}  // namespace weilmass
