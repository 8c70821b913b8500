#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "weilmass/gsp4.hpp"
#include "weilmass/localfactors.hpp"

using namespace weilmass;
using gsp4::ShapeKind;

namespace {

const WeilPolynomial kExample = WeilPolynomial::make(61, 1, -29, 331);

BigRational frac(long n, long d) { return make_rational(BigInt(n), BigInt(d)); }

double to_double(const BigFloat& x) { return x.convert_to<double>(); }

}  // namespace

TEST_CASE("shape values") {
  CHECK(nu_from_shape(ShapeKind::Split, 3) == frac(9, 4));
  CHECK(nu_from_shape(ShapeKind::Quartic, 3) == frac(9, 10));
  CHECK(nu_from_shape(ShapeKind::DQ_S, 5) == frac(25, 36));
  CHECK(nu_from_shape(ShapeKind::DQ_I, 5) == frac(25, 24));
  CHECK(nu_from_shape(ShapeKind::QRL, 7) == 1);
  CHECK(nu_from_shape(ShapeKind::DRL_S, 7) == 1);
  CHECK(nu_from_shape(ShapeKind::RQ_2, 7) == 1);
  CHECK(nu_from_shape(ShapeKind::DRL_I, 7) == frac(7, 6));
  CHECK(nu_from_shape(ShapeKind::RQ_1, 7) == frac(7, 8));
}

TEST_CASE("local factors of the p = 61 example") {
  const CharacterGroup cg = identify_characters(kExample);
  // 3 generates (Z/5)^*: inert of degree 4.
  CHECK(nu_ell(kExample, 3, cg).value == frac(9, 10));
  // 11 = 1 mod 5: totally split.
  CHECK(nu_ell(kExample, 11, cg).value == frac(121, 100));
  // 5 is totally ramified.
  const LocalFactor five = nu_ell(kExample, 5, cg);
  CHECK(five.value == 1);
  CHECK(five.shape == ShapeKind::QRL);
  CHECK_FALSE(five.disagreement());
  // 19 = 4 mod 5: Frobenius of order 2.
  CHECK(nu_ell(kExample, 19, cg).value == frac(361, 400));
  // T^2 + 29T + 331 has discriminant 5, a square mod 61.
  CHECK(nu_p(kExample) == frac(3721, 3600));
  const LocalFactor two = nu_ell(kExample, 2, cg);
  CHECK(two.path == FactorPath::Character);
  CHECK(two.value == frac(4, 5));
}

TEST_CASE("nu_p rejects a repeated root") {
  // T^2 - 2T + 1 mod 5.
  CHECK_THROWS_AS(nu_p(WeilPolynomial::make(5, 1, 2, 1)), Error);
}

TEST_CASE("archimedean factor") {
  const double expect = 5 / (4 * std::numbers::pi * std::numbers::pi);
  CHECK(to_double(nu_infinity(kExample)) == doctest::Approx(expect).epsilon(1e-15));
  const CharacterGroup cg = identify_characters(kExample);
  const BigFloat diff = nu_infinity(kExample) - nu_infinity_field(cg);
  CHECK(abs(diff) < BigFloat("1e-45"));
}

TEST_CASE("shape values equal normalized cyclic counts at ell = 3") {
  const auto en = gsp4::GroupEnumeration::load_or_build(3, gsp4::default_cache_dir());
  gsp4::FiberOracle oracle(en);
  const BigInt g = gsp4::gsp4_order(3);
  for (std::int64_t q : {5, 7, 11, 13, 61}) {
    for (const auto& entry : enumerate_corpus(q)) {
      const auto count = oracle.count_cyclic_with_semisimplification(entry.poly);
      const BigRational expect = make_rational(BigInt(static_cast<unsigned long>(count.total)) * 9 * 2, g);
      CHECK_MESSAGE(nu_ell_shape(entry.poly, 3) == expect, entry.poly.to_string());
    }
  }
}

TEST_CASE("partial products of the p = 61 example") {
  const CharacterGroup cg = identify_characters(kExample);
  const auto rows = partial_products(kExample, cg, {1000, 10000, 100000});
  REQUIRE(rows.size() == 3);
  // Independent double-precision evaluation of the same product.
  const double expect[] = {0.1002245, 0.1000529, 0.0999887};
  for (int i = 0; i < 3; ++i) {
    CHECK(to_double(rows[i].value) == doctest::Approx(expect[i]).epsilon(5e-7));
    CHECK(rows[i].disagreements == 0);
  }
  CHECK_THROWS_AS(partial_products(kExample, cg, {1000, 1000}), Error);
}

TEST_CASE("Sato-Tate angle density is a probability density") {
  CHECK(angle_density_total() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sato_tate_angle_density(1.0, 1.0) == 0);
  CHECK(sato_tate_angle_density(2.0, 1.0) == 0);
}

TEST_CASE("(a, b) density is the pushforward of the angle density") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> angle(0, std::numbers::pi);
  for (double q : {1.0, 7.0, 61.0}) {
    for (int i = 0; i < 500; ++i) {
      double t1 = angle(rng), t2 = angle(rng);
      if (t1 > t2) std::swap(t1, t2);
      const double c1 = std::cos(t1), c2 = std::cos(t2), s1 = std::sin(t1), s2 = std::sin(t2);
      const double jac = 8 * std::pow(q, 1.5) * s1 * s2 * std::abs(c1 - c2);
      if (jac < 1e-6) continue;
      const double a = 2 * std::sqrt(q) * (c1 + c2);
      const double b = 2 * q + 4 * q * c1 * c2;
      CHECK(sato_tate_weil_density(a, b, q) == doctest::Approx(sato_tate_angle_density(t1, t2) / jac).epsilon(1e-8));
    }
  }
  CHECK(sato_tate_weil_density(0, 100, 1) == 0);
}

TEST_CASE("cell masses sum to one and Monte Carlo agrees") {
  for (double q : {1.0, 61.0}) {
    const SatoTateGrid mass = weil_density_cell_mass(q, 6, 6);
    double total = 0;
    for (double v : mass.values) {
      CHECK(v >= 0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  }
  const std::uint64_t n = 200000;
  const SatoTateGrid mass = weil_density_cell_mass(9, 6, 6);
  const SatoTateGrid counts = monte_carlo_pushforward(9, 6, 6, n, 7);
  const SatoTateComparison cmp = compare_grids(mass, counts, n, 5.0);
  CHECK(cmp.stray_cells == 0);
  CHECK(cmp.cells_over == 0);
}
