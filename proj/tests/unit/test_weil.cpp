#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "weilmass/characters.hpp"
#include "weilmass/weil.hpp"

using namespace weilmass;

namespace {

// Bareiss fraction-free determinant.
BigInt determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// disc(f) = Res(f, f') for a monic quartic; coefficients constant term first.
BigInt sylvester_discriminant(const std::array<BigInt, 5>& c) {
  std::array<BigInt, 4> d;
  for (int i = 1; i <= 4; ++i) d[i - 1] = c[i] * i;
  std::vector<std::vector<BigInt>> s(7, std::vector<BigInt>(7, 0));
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i <= 4; ++i) s[r][r + i] = c[4 - i];
  for (int r = 0; r < 4; ++r)
    for (int i = 0; i <= 3; ++i) s[3 + r][r + i] = d[3 - i];
  return determinant(s);
}

// Remainder-free division by a monic divisor, coefficients constant term first.
bool divides(const std::vector<BigInt>& g, std::vector<BigInt> f) {
  const std::size_t dg = g.size() - 1;
  for (std::size_t k = f.size() - 1; k >= dg; --k) {
    const BigInt t = f[k];
    for (std::size_t i = 0; i <= dg; ++i) f[k - dg + i] -= t * g[i];
    if (k == dg) break;
  }
  for (std::size_t i = 0; i < dg; ++i)
    if (f[i] != 0) return false;
  return true;
}

// Every root has absolute value sqrt(q), so a rational root squares to q and a monic
// integer quadratic factor has constant term +-q and |linear term| <= 2 sqrt(q).
bool reducible_oracle(const WeilPolynomial& w) {
  const auto c = w.coefficients();
  const std::vector<BigInt> f(c.begin(), c.end());
  const auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(w.q))));
  if (r * r == w.q) {
    for (std::int64_t s : {r, -r})
      if (divides({BigInt(static_cast<long>(-s)), 1}, f)) return true;
  }
  const auto cmax = static_cast<std::int64_t>(2 * std::sqrt(static_cast<double>(w.q))) + 1;
  for (std::int64_t lin = -cmax; lin <= cmax; ++lin)
    for (std::int64_t con : {w.q, -w.q})
      if (divides({BigInt(static_cast<long>(con)), BigInt(static_cast<long>(lin)), 1}, f)) return true;
  return false;
}

// K = Q(sqrt(d))(sqrt(r + s sqrt(d))) with x^2 - 4q = (r + s sqrt(d)) / 4 for a root x of f+.
// Biquadratic iff r^2 - d s^2 is a square, cyclic iff (r^2 - d s^2) d is.
GaloisType galois_oracle(const WeilPolynomial& w) {
  const BigInt a = w.a, q = w.q;
  const BigInt d = a * a - 4 * BigInt(w.b) + 8 * q;
  const BigInt r = a * a + d - 16 * q;
  const BigInt s = 2 * a;
  const BigInt n = r * r - d * s * s;
  if (n > 0 && is_perfect_square(n)) return GaloisType::Biquadratic;
  if (n * d > 0 && is_perfect_square(n * d)) return GaloisType::Cyclic4;
  return GaloisType::NotAbelianGalois;
}

// Floating-point region test: both roots of f+ real and within [-2 sqrt q, 2 sqrt q].
// Returns nullopt within 1e-9 of the boundary.
std::optional<bool> region_oracle(const WeilPolynomial& w) {
  const long double a = w.a, b = w.b, q = w.q;
  const long double disc = a * a - 4 * (b - 2 * q);
  if (std::fabs(disc) < 1e-9L) return std::nullopt;
  if (disc < 0) return false;
  const long double lim = 2 * std::sqrt(q);
  const long double hi = (a + std::sqrt(disc)) / 2;
  const long double lo = (a - std::sqrt(disc)) / 2;
  if (std::fabs(hi - lim) < 1e-9L || std::fabs(lo + lim) < 1e-9L) return std::nullopt;
  return hi <= lim && lo >= -lim;
}

template <class F>
void for_box(std::int64_t q, F&& fn) {
  const auto [p, e] = prime_power_decomposition(q);
  const auto amax = static_cast<std::int64_t>(4 * std::sqrt(static_cast<double>(q))) + 1;
  for (std::int64_t a = -amax; a <= amax; ++a)
    for (std::int64_t b = -3 * q; b <= 7 * q; ++b) fn(WeilPolynomial::make(p, e, a, b));
}

constexpr std::int64_t kQs[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 25, 27};

}  // namespace

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(WeilPolynomial::make(4, 1, 0, 0), Error);
  CHECK_THROWS_AS(WeilPolynomial::make(3, 0, 0, 0), Error);
  CHECK_THROWS_AS(WeilPolynomial::make(2, 40, 0, 0), Error);
  CHECK(WeilPolynomial::from_displayed(61, 1, 29, 331) == WeilPolynomial::make(61, 1, -29, 331));
  const auto w = WeilPolynomial::make(5, 2, 3, -7);
  CHECK(w.q == 25);
  const auto c = w.small_coefficients();
  CHECK(c == std::array<std::int64_t, 5>{625, -75, -7, -3, 1});
}

TEST_CASE("invariants of the p = 61 example") {
  const auto w = WeilPolynomial::make(61, 1, -29, 331);
  const WeilInvariants inv = invariants(w);
  CHECK(inv.delta_fplus == 5);
  CHECK(inv.delta_order == 125);
  CHECK(inv.delta_f == 465125);
  CHECK(inv.conductor == 61);
  CHECK(galois_type(w) == GaloisType::Cyclic4);

  const ValidationReport rep = validate(w);
  CHECK(rep.passed());
  REQUIRE(rep.delta_k.has_value());
  CHECK(*rep.delta_k == 125);
}

TEST_CASE("discriminants agree with a Sylvester resultant") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    std::array<BigInt, 5> c;
    for (int i = 0; i < 4; ++i) c[i] = static_cast<long>(rng() % 2001) - 1000;
    c[4] = 1;
    CHECK(quartic_discriminant(c) == sylvester_discriminant(c));
  }
  for (std::int64_t q : {3, 8, 25}) {
    for_box(q, [&](const WeilPolynomial& w) {
      const BigInt d = sylvester_discriminant(w.coefficients());
      CHECK(invariants(w).delta_f == d);
      CHECK(quartic_discriminant(w.coefficients()) == d);
    });
  }
}

TEST_CASE("Weil region test agrees with root locations") {
  for (std::int64_t q : kQs) {
    for_box(q, [&](const WeilPolynomial& w) {
      const auto expect = region_oracle(w);
      if (expect) CHECK(w.in_weil_region() == *expect);
    });
  }
}

TEST_CASE("irreducibility agrees with a bounded factor search") {
  for (std::int64_t q : kQs) {
    for_box(q, [&](const WeilPolynomial& w) {
      if (!w.in_weil_region()) return;
      CHECK_MESSAGE(is_irreducible_over_q(w) == !reducible_oracle(w), w.to_string());
    });
  }
}

TEST_CASE("Galois type agrees with the norm criterion and is invariant under a -> -a") {
  std::size_t seen[3] = {0, 0, 0};
  for (std::int64_t q : kQs) {
    for_box(q, [&](const WeilPolynomial& w) {
      if (!w.in_weil_region() || !is_irreducible_over_q(w)) return;
      const GaloisType t = galois_type(w);
      CHECK_MESSAGE(t == galois_oracle(w), w.to_string());
      CHECK(galois_type(WeilPolynomial::make(w.p, w.e, -w.a, w.b)) == t);
      ++seen[static_cast<int>(t)];
    });
  }
  for (auto n : seen) CHECK(n > 0);
}

TEST_CASE("galois_type rejects reducible input") {
  // T^4 + 2 T^2 + 9 = (T^2 + 2T + 3)(T^2 - 2T + 3) at q = 3.
  const auto w = WeilPolynomial::make(3, 1, 0, 2);
  REQUIRE_FALSE(is_irreducible_over_q(w));
  CHECK_THROWS_AS(galois_type(w), Error);
}

TEST_CASE("corpus matches an independent filter of the Weil box") {
  for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9, 11}) {
    std::vector<WeilPolynomial> expect;
    for_box(q, [&](const WeilPolynomial& w) {
      const auto inside = region_oracle(w);
      if (!inside.value_or(w.in_weil_region())) return;
      if (w.b % w.p == 0 || reducible_oracle(w)) return;
      if (galois_oracle(w) == GaloisType::NotAbelianGalois) return;
      if (validate(w).passed()) expect.push_back(w);
    });
    std::vector<WeilPolynomial> got;
    for (const auto& entry : enumerate_corpus(q)) {
      CHECK(entry.galois_type == galois_oracle(entry.poly));
      CHECK(entry.delta_order == invariants(entry.poly).delta_order);
      got.push_back(entry.poly);
    }
    CHECK_MESSAGE(got == expect, "q = ", q);
  }
}

TEST_CASE("corpus at q = 61 contains the example and is closed under a -> -a") {
  const auto corpus = enumerate_corpus(61);
  bool found = false;
  std::set<std::pair<std::int64_t, std::int64_t>> keys;
  for (const auto& entry : corpus) keys.insert({entry.poly.a, entry.poly.b});
  for (const auto& [a, b] : keys) {
    CHECK(keys.count({-a, b}) == 1);
    found = found || (a == -29 && b == 331);
  }
  CHECK(found);
}

TEST_CASE("validation flags each failure") {
  CHECK_FALSE(validate(WeilPolynomial::make(5, 1, 0, 100)).in_weil_region);
  CHECK_FALSE(validate(WeilPolynomial::make(5, 1, 1, 5)).ordinary);
  const auto reducible = validate(WeilPolynomial::make(3, 1, 0, 2));
  CHECK_FALSE(reducible.irreducible);
  CHECK_FALSE(reducible.passed());
}

TEST_CASE("prime power decomposition") {
  CHECK(prime_power_decomposition(243) == std::pair<std::int64_t, int>{3, 5});
  CHECK(prime_power_decomposition(61) == std::pair<std::int64_t, int>{61, 1});
  CHECK_THROWS_AS(prime_power_decomposition(12), Error);
  CHECK_THROWS_AS(prime_power_decomposition(1), Error);
}
