#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weilmass/algebra.hpp"
#include "weilmass/gsp4/shape.hpp"
#include "weilmass/weil.hpp"

namespace weilmass {

/// Value in {0, 1, i, -1, -i}: exponent k stands for i^k, kZero for 0.
struct CharValue {
  static constexpr std::int8_t kZero = -1;
  std::int8_t exponent = kZero;

  bool is_zero() const noexcept { return exponent == kZero; }
  /// (re, im)
  std::array<int, 2> gaussian() const noexcept;
  std::string to_string() const;
  friend bool operator==(const CharValue&, const CharValue&) = default;
};

/// Primitive Dirichlet character of order dividing 4.
class DirichletCharacter {
 public:
  DirichletCharacter() = default;
  /// `exponents[n]` for 0 <= n < conductor; CharValue::kZero where gcd(n, conductor) > 1.
  DirichletCharacter(std::uint64_t conductor, std::vector<std::int8_t> exponents);

  static DirichletCharacter trivial();
  /// n -> (d / n) for a fundamental discriminant d.
  static DirichletCharacter kronecker(const BigInt& d);

  std::uint64_t conductor() const noexcept { return conductor_; }
  int order() const noexcept { return order_; }
  bool is_odd() const;
  CharValue at(const BigInt& n) const;
  CharValue at(std::uint64_t n) const;
  CharValue at_signed(std::int64_t n) const;
  const std::vector<std::int8_t>& exponents() const noexcept { return exp_; }

  DirichletCharacter conjugate() const;
  DirichletCharacter square() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.conductor_ == b.conductor_ && a.exp_ == b.exp_;
  }

 private:
  std::uint64_t conductor_ = 1;
  int order_ = 1;
  std::vector<std::int8_t> exp_{0};
};

CharValue chi_at_ell(const DirichletCharacter& chi, std::uint64_t ell);

struct SplittingData {
  std::uint32_t ell = 0;
  unsigned e = 0;  ///< ramification index
  unsigned f = 0;  ///< residue degree
  unsigned r = 0;  ///< number of primes above ell
  unsigned decomposition_order() const noexcept { return e * f; }
  unsigned inertia_order() const noexcept { return e; }
  gsp4::ClassShape shape;
};

/// (e, f, r) and the Frobenius shape at ell != p. For odd ell the row must occur in the
/// table of the given Galois type; ErrorKind::Validation otherwise.
SplittingData splitting_invariants(const WeilPolynomial& w, std::uint32_t ell,
                                   std::optional<GaloisType> type = std::nullopt);

struct CharacterGroup {
  GaloisType galois_type = GaloisType::Cyclic4;
  /// trivial, the character of K+, then the two characters of S(K).
  std::array<DirichletCharacter, 4> characters;
  BigInt delta_k;
  BigInt delta_kplus;
  /// Biquadratic only: fundamental discriminants D1 < D2 < 0 of the imaginary quadratic subfields.
  std::optional<std::array<BigInt, 2>> imaginary_discriminants;
  std::uint64_t prime_bound = 0;

  const DirichletCharacter& trivial() const { return characters[0]; }
  const DirichletCharacter& real_quadratic() const { return characters[1]; }
  std::array<DirichletCharacter, 2> s_k() const { return {characters[2], characters[3]}; }
  /// Product of all conductors, which equals |delta_k|.
  BigInt conductor_product() const;
};

struct IdentifyOptions {
  /// 0 selects max(1000, 30 * largest conductor still in play after screening below 1000).
  std::uint64_t prime_bound = 0;
  /// Doublings of the bound attempted before an ambiguity becomes an error.
  int max_escalations = 3;
};

/// Recovers the character group of K_f from splitting data at primes not dividing p * disc(f).
/// Throws ErrorKind::Identification when no candidate, or more than one, survives.
CharacterGroup identify_characters(const WeilPolynomial& w, const IdentifyOptions& opts = {});

/// ell^2 / prod_{chi in S(K)} (ell - chi(ell)), exact.
BigRational nu_ell_K(const CharacterGroup& cg, std::uint64_t ell);

/// {"galois_type", "delta_k", "delta_kplus", "characters": [{"conductor", "order", "parity", "exponents"?}]}
std::string character_group_json(const CharacterGroup& cg, bool with_tables = false);

}  // namespace weilmass
