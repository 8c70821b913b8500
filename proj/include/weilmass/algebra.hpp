#pragma once

// Exact integer and rational arithmetic shared by every other module.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace weilmass {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Failure classes surfaced to the command line as distinct exit codes.
enum class ErrorKind {
  InvalidArgument,
  Validation,
  Identification,
  Integrality,
  OracleMismatch,
  Budget,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Builds a rational in lowest terms with a positive denominator.
BigRational make_rational(const BigInt& num, const BigInt& den);

std::string to_string(const BigInt& x);
std::string to_string(const BigRational& x);

bool is_prime(std::uint64_t n);
std::vector<std::uint32_t> primes_below(std::uint32_t bound);

bool is_perfect_square(const BigInt& n);
BigInt isqrt(const BigInt& n);

/// Kronecker symbol (D/n) for n >= 1.
int kronecker_symbol(std::int64_t d, std::uint64_t n);
int kronecker_symbol(const BigInt& d, const BigInt& n);

struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Default trial-division ceiling. Any n <= ceiling^2 always factors completely.
inline constexpr std::uint64_t kDefaultTrialBound = 10'000'000;

/// Factors n >= 1 by trial division up to `trial_bound`. A leftover cofactor c is
/// accepted as prime when c <= trial_bound^2; otherwise ErrorKind::Budget is thrown.
std::vector<PrimePower> factor_integer(const BigInt& n, std::uint64_t trial_bound = kDefaultTrialBound);

/// Flattened multiset form of factor_integer, primes in increasing order.
std::vector<BigInt> prime_factor_multiset(const BigInt& n, std::uint64_t trial_bound = kDefaultTrialBound);

/// All positive divisors, in increasing order.
std::vector<BigInt> divisors(const std::vector<PrimePower>& factorization);

/// Fundamental discriminant of Q(sqrt(n)) for a non-square n != 0.
BigInt fundamental_discriminant(const BigInt& n, std::uint64_t trial_bound = kDefaultTrialBound);

bool is_fundamental_discriminant(const BigInt& d, std::uint64_t trial_bound = kDefaultTrialBound);

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
std::int64_t mod_floor(std::int64_t x, std::int64_t m);
std::uint64_t mod_floor(const BigInt& x, std::uint64_t m);

/// Square root of a modulo an odd prime p by Tonelli-Shanks, or nullopt for a nonresidue.
std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t p);

}  // namespace weilmass
