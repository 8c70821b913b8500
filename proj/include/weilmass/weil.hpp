#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weilmass/algebra.hpp"

namespace weilmass {

/// f(T) = T^4 - a T^3 + b T^2 - a q T + q^2 with q = p^e.
struct WeilPolynomial {
  std::int64_t p = 0;
  int e = 0;
  std::int64_t q = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;

  /// Throws ErrorKind::InvalidArgument for a non-prime p, e < 1 or q overflowing 2^31.
  static WeilPolynomial make(std::int64_t p, int e, std::int64_t a, std::int64_t b);
  /// Takes the displayed coefficients of T^3 and T^2, i.e. (a, b) = (-c3, c2).
  static WeilPolynomial from_displayed(std::int64_t p, int e, std::int64_t c3, std::int64_t c2);

  /// Integer coefficients, constant term first.
  std::array<BigInt, 5> coefficients() const;
  std::array<std::int64_t, 5> small_coefficients() const;

  /// |a| <= 4 sqrt(q) and 2|a| sqrt(q) - 2q <= b <= a^2/4 + 2q, decided exactly.
  bool in_weil_region() const;

  std::string to_string() const;

  friend bool operator==(const WeilPolynomial&, const WeilPolynomial&) = default;
};

struct WeilInvariants {
  BigInt fplus_c1;      ///< f+(T) = T^2 + fplus_c1 T + fplus_c0
  BigInt fplus_c0;
  BigInt delta_fplus;   ///< a^2 - 4b + 8q
  BigInt norm_term;     ///< b^2 + 4bq + 4q^2 - 4a^2 q
  BigInt delta_order;   ///< delta_fplus^2 * norm_term
  BigInt delta_f;       ///< q^2 * delta_order
  BigInt conductor;     ///< q
};

WeilInvariants invariants(const WeilPolynomial& w);

/// Discriminant of a monic quartic (coefficients constant term first) by the closed formula.
BigInt quartic_discriminant(const std::array<BigInt, 5>& c);

enum class GaloisType { Cyclic4, Biquadratic, NotAbelianGalois };

std::string to_string(GaloisType t);
GaloisType galois_type_from_string(const std::string& s);

/// Rational-root test plus an exact search for monic integer quadratic factors.
bool is_irreducible_over_q(const WeilPolynomial& w);

/// Cubic resolvent classification. Requires w irreducible (ErrorKind::Validation otherwise)
/// and inside the Weil region, where every resolvent root lies in [-2q, 2q].
GaloisType galois_type(const WeilPolynomial& w);

struct ValidationReport {
  bool in_weil_region = false;
  bool ordinary = false;
  bool irreducible = false;
  std::optional<GaloisType> galois_type;
  bool unramified_at_p = false;
  bool maximal = false;
  /// Principal polarizability is never checked; it is carried as a user assertion.
  bool polarizable_asserted_by_user = true;
  std::optional<BigInt> delta_order;
  std::optional<BigInt> delta_k;
  std::vector<std::string> failures;

  bool passed() const {
    return in_weil_region && ordinary && irreducible && galois_type.has_value() &&
           *galois_type != GaloisType::NotAbelianGalois && unramified_at_p && maximal;
  }
};

ValidationReport validate(const WeilPolynomial& w);

struct CorpusEntry {
  WeilPolynomial poly;
  GaloisType galois_type = GaloisType::NotAbelianGalois;
  BigInt delta_order;
};

/// q = p^e decomposition; throws ErrorKind::InvalidArgument when q is not a prime power.
std::pair<std::int64_t, int> prime_power_decomposition(std::int64_t q);

/// Every (a, b) in the Weil region passing ordinarity, the Galois test, p-unramifiedness and
/// maximality, ordered by (a, b).
std::vector<CorpusEntry> enumerate_corpus(std::int64_t q);

/// {"p":..,"e":..,"a":..,"b":..,"galois_type":..,"delta_order":..}
std::string corpus_json_line(const CorpusEntry& entry);

}  // namespace weilmass
