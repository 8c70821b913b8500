#include "weilmass/algebra.hpp"

#include <algorithm>
#include <cstdlib>

namespace weilmass {

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const BigRational& x) { return x.get_str(); }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  if (n < (std::uint64_t{1} << 32)) {
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
      if (n % d == 0) return false;
    }
    return true;
  }
  BigInt z = static_cast<unsigned long>(n);
  return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

std::vector<std::uint32_t> primes_below(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  if (bound <= 2) return out;
  std::vector<bool> composite(bound, false);
  for (std::uint64_t i = 2; i < bound; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
  }
  return out;
}

bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of negative");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

int kronecker_symbol(std::int64_t d, std::uint64_t n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  static constexpr int kTab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  std::int64_t a = d;
  std::uint64_t b = n;
  if (a % 2 == 0 && b % 2 == 0) return 0;
  int v = 0;
  while (b % 2 == 0) {
    ++v;
    b /= 2;
  }
  int k = 1;
  if (v % 2 == 1) k = kTab2[static_cast<unsigned>(a) & 7];
  // b odd now; reduce a modulo b keeping the sign rule for negative a.
  if (a < 0) {
    if (b % 4 == 3) k = -k;
    a = -a;
  }
  std::uint64_t ua = static_cast<std::uint64_t>(a);
  while (ua != 0) {
    int w = 0;
    while (ua % 2 == 0) {
      ++w;
      ua /= 2;
    }
    if (w % 2 == 1) k *= kTab2[b & 7];
    if ((ua & b & 2) != 0) k = -k;
    std::uint64_t r = b % ua;
    b = ua;
    ua = r;
  }
  return b == 1 ? k : 0;
}

int kronecker_symbol(const BigInt& d, const BigInt& n) {
  if (n <= 0) throw Error(ErrorKind::InvalidArgument, "kronecker_symbol needs n >= 1");
  return mpz_kronecker(d.get_mpz_t(), n.get_mpz_t());
}

std::vector<PrimePower> factor_integer(const BigInt& n, std::uint64_t trial_bound) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "factor_integer needs n >= 1");
  std::vector<PrimePower> out;
  BigInt m = n;
  auto strip = [&](unsigned long d) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), d) == 0) return;
    PrimePower pp{BigInt(d), 0};
    while (mpz_divisible_ui_p(m.get_mpz_t(), d) != 0) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), d);
      ++pp.exponent;
    }
    out.push_back(pp);
  };
  strip(2);
  unsigned long d = 3;
  for (; d <= trial_bound && m.fits_ulong_p() == 0; d += 2) {
    if (BigInt(d) * d > m) break;
    strip(d);
  }
  if (m.fits_ulong_p() != 0) {
    // Native loop once the cofactor fits a machine word.
    unsigned long mm = m.get_ui();
    for (; d <= trial_bound && mm > 1 && d <= mm / d; d += 2) {
      if (mm % d != 0) continue;
      PrimePower pp{BigInt(d), 0};
      while (mm % d == 0) {
        mm /= d;
        ++pp.exponent;
      }
      out.push_back(pp);
    }
    m = mm;
  }
  if (m > 1) {
    BigInt ceiling = BigInt(static_cast<unsigned long>(trial_bound));
    ceiling *= ceiling;
    if (m > ceiling && BigInt(d) * d <= m) {
      throw Error(ErrorKind::Budget, "factorization budget exceeded: cofactor " + m.get_str() +
                                         " has no factor below " + std::to_string(trial_bound));
    }
    out.push_back({m, 1});
  }
  return out;
}

std::vector<BigInt> prime_factor_multiset(const BigInt& n, std::uint64_t trial_bound) {
  std::vector<BigInt> out;
  for (const auto& pp : factor_integer(n, trial_bound)) {
    for (unsigned i = 0; i < pp.exponent; ++i) out.push_back(pp.prime);
  }
  return out;
}

std::vector<BigInt> divisors(const std::vector<PrimePower>& factorization) {
  std::vector<BigInt> out{BigInt(1)};
  for (const auto& pp : factorization) {
    const std::size_t base = out.size();
    BigInt power = 1;
    for (unsigned e = 1; e <= pp.exponent; ++e) {
      power *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt fundamental_discriminant(const BigInt& n, std::uint64_t trial_bound) {
  if (n == 0 || is_perfect_square(n)) {
    throw Error(ErrorKind::InvalidArgument, "fundamental_discriminant of a square");
  }
  BigInt core = n < 0 ? BigInt(-1) : BigInt(1);
  BigInt absn = abs(n);
  for (const auto& pp : factor_integer(absn, trial_bound)) {
    if (pp.exponent % 2 == 1) core *= pp.prime;
  }
  // core is squarefree; disc is core if core = 1 mod 4 else 4*core.
  BigInt r = core % 4;
  if (r < 0) r += 4;
  return r == 1 ? core : BigInt(4 * core);
}

bool is_fundamental_discriminant(const BigInt& d, std::uint64_t trial_bound) {
  if (d == 0 || d == 1 || is_perfect_square(d)) return false;
  return fundamental_discriminant(d, trial_bound) == d;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 result = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = (result * b) % mod;
    b = (b * b) % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::int64_t mod_floor(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

std::uint64_t mod_floor(const BigInt& x, std::uint64_t m) {
  return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(m));
}

std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (mod_pow(a, (p - 1) / 2, p) != 1) return std::nullopt;
  auto mul = [p](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
  };
  std::uint64_t s = 0, d = p - 1;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (mod_pow(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t c = mod_pow(z, d, p), t = mod_pow(a, d, p), r = mod_pow(a, (d + 1) / 2, p);
  // Invariant: r^2 = a t, and t has order dividing 2^(s-1) after each step.
  while (t != 1) {
    std::uint64_t i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mul(t2, t2);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < s; ++j) b = mul(b, b);
    s = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return r;
}

}  // namespace weilmass
