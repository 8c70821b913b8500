#include <map>
#include <numeric>

#include "doctest.h"
#include "weilmass/characters.hpp"
#include "weilmass/localfactors.hpp"

using namespace weilmass;

namespace {

std::size_t root_count_mod(const WeilPolynomial& w, std::uint32_t ell) {
  const auto c = w.coefficients();
  std::size_t n = 0;
  for (std::uint64_t x = 0; x < ell; ++x) {
    std::uint64_t v = 0;
    for (int k = 4; k >= 0; --k) v = (v * x + mod_floor(c[k], ell)) % ell;
    n += v == 0;
  }
  return n;
}

int value_order(const CharValue& v) {
  if (v.is_zero()) return 0;
  return v.exponent == 0 ? 1 : v.exponent == 2 ? 2 : 4;
}

const std::vector<CorpusEntry>& small_corpus() {
  static const std::vector<CorpusEntry> all = [] {
    std::vector<CorpusEntry> out;
    for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17}) {
      auto c = enumerate_corpus(q);
      out.insert(out.end(), c.begin(), c.end());
    }
    return out;
  }();
  return all;
}

}  // namespace

TEST_CASE("Kronecker characters") {
  const auto chi = DirichletCharacter::kronecker(BigInt(-4));
  CHECK(chi.conductor() == 4);
  CHECK(chi.order() == 2);
  CHECK(chi.is_odd());
  CHECK(chi.at(std::uint64_t{1}).exponent == 0);
  CHECK(chi.at(std::uint64_t{3}).exponent == 2);
  CHECK(chi.at(std::uint64_t{2}).is_zero());
  CHECK_FALSE(DirichletCharacter::kronecker(BigInt(5)).is_odd());
  for (std::int64_t d : {-3, -4, -8, -7, 5, 8, 12, -20, 21}) {
    const auto k = DirichletCharacter::kronecker(BigInt(d));
    for (std::uint64_t n = 1; n < 100; ++n) {
      const int s = kronecker_symbol(d, n);
      const CharValue v = k.at(n);
      CHECK((s == 0 ? v.is_zero() : v.exponent == (s == 1 ? 0 : 2)));
    }
  }
}

TEST_CASE("the p = 61 example has the quartic characters of conductor 5") {
  const auto w = WeilPolynomial::make(61, 1, -29, 331);
  const CharacterGroup cg = identify_characters(w);
  CHECK(cg.galois_type == GaloisType::Cyclic4);
  CHECK(cg.delta_k == 125);
  CHECK(cg.delta_kplus == 5);
  CHECK(cg.conductor_product() == 125);
  CHECK(cg.real_quadratic() == DirichletCharacter::kronecker(BigInt(5)));
  for (const auto& chi : cg.s_k()) {
    CHECK(chi.conductor() == 5);
    CHECK(chi.order() == 4);
    CHECK(chi.is_odd());
    // 2 generates (Z/5)^*, so chi(2) is a primitive fourth root of unity.
    CHECK(value_order(chi.at(std::uint64_t{2})) == 4);
  }
  CHECK(cg.s_k()[0] == cg.s_k()[1].conjugate());
}

TEST_CASE("characters are multiplicative, primitive and square to the real character") {
  for (const auto& entry : small_corpus()) {
    const CharacterGroup cg = identify_characters(entry.poly);
    CHECK(cg.galois_type == entry.galois_type);
    CHECK(abs(cg.delta_k) == abs(entry.delta_order));
    CHECK(cg.conductor_product() == abs(cg.delta_k));
    for (const auto& chi : cg.s_k()) {
      CHECK(chi.is_odd());
      const std::uint64_t f = chi.conductor();
      for (std::uint64_t m = 1; m < 40; ++m) {
        for (std::uint64_t n = 1; n < 40; ++n) {
          const CharValue a = chi.at(m), b = chi.at(n), ab = chi.at(m * n);
          if (a.is_zero() || b.is_zero()) {
            CHECK(ab.is_zero());
          } else {
            CHECK(ab.exponent == (a.exponent + b.exponent) % 4);
          }
        }
      }
      // Primitive: for every proper divisor d of f, chi is not constant on some unit class mod d.
      for (std::uint64_t d = 1; d < f; ++d) {
        if (f % d != 0) continue;
        std::map<std::uint64_t, CharValue> first;
        bool factors_through = true;
        for (std::uint64_t n = 1; n < f && factors_through; ++n) {
          if (std::gcd(n, f) != 1) continue;
          const auto [it, fresh] = first.emplace(n % d, chi.at(n));
          factors_through = fresh || it->second == chi.at(n);
        }
        CHECK_FALSE(factors_through);
      }
    }
    if (cg.galois_type == GaloisType::Cyclic4) {
      const auto sq = cg.s_k()[0].square();
      for (std::uint64_t n = 1; n < 200; ++n) {
        const CharValue v = sq.at(n);
        if (!v.is_zero() && std::gcd(n, cg.s_k()[0].conductor()) == 1) CHECK(v == cg.real_quadratic().at(n));
      }
    }
  }
}

TEST_CASE("complete splitting matches roots of f mod ell") {
  for (const auto& entry : small_corpus()) {
    const WeilPolynomial& w = entry.poly;
    const CharacterGroup cg = identify_characters(w);
    for (std::uint32_t ell : primes_below(300)) {
      if (ell == 2 || static_cast<std::int64_t>(ell) == w.p) continue;
      if (mpz_divisible_ui_p(entry.delta_order.get_mpz_t(), ell) != 0) continue;
      bool all_trivial = true;
      for (const auto& chi : cg.characters) all_trivial = all_trivial && chi.at(std::uint64_t{ell}).exponent == 0;
      const std::size_t roots = root_count_mod(w, ell);
      CHECK_MESSAGE(roots == (all_trivial ? 4u : 0u), w.to_string(), " at ", ell);
      // Residue degree is the order of Frobenius in the character group.
      int f = 1;
      for (const auto& chi : cg.characters) f = std::max(f, value_order(chi.at(std::uint64_t{ell})));
      const SplittingData sd = splitting_invariants(w, ell, cg.galois_type);
      CHECK(sd.e == 1);
      CHECK(sd.f == static_cast<unsigned>(f));
      CHECK(sd.r * sd.f == 4);
      for (const auto& fac : factor_mod_ell(std::span<const BigInt>(w.coefficients().data(), 5), ell))
        CHECK(fac.poly.degree() == f);
    }
  }
}

TEST_CASE("character and shape local factors agree at every odd ell") {
  for (const auto& entry : small_corpus()) {
    const WeilPolynomial& w = entry.poly;
    const CharacterGroup cg = identify_characters(w);
    for (std::uint32_t ell : primes_below(200)) {
      if (ell == 2 || static_cast<std::int64_t>(ell) == w.p) continue;
      CHECK_MESSAGE(nu_ell_shape(w, ell) == nu_ell_K(cg, ell), w.to_string(), " at ", ell);
    }
  }
}

TEST_CASE("character group JSON") {
  const CharacterGroup cg = identify_characters(WeilPolynomial::make(61, 1, -29, 331));
  const std::string js = character_group_json(cg);
  CHECK(js.find("\"delta_k\"") != std::string::npos);
  CHECK(js.find("125") != std::string::npos);
}
