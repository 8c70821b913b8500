#include <numbers>

#include "doctest.h"
#include "weilmass/classnumber.hpp"

using namespace weilmass;

namespace {

double to_double(const BigFloat& x) { return x.convert_to<double>(); }

// Smallest y in (0, limit] with x^2 - D y^2 = +-4, searched directly.
std::optional<QuadraticUnit> brute_unit(long d, long limit) {
  for (long y = 1; y <= limit; ++y) {
    for (int n : {-4, 4}) {
      const BigInt x2 = BigInt(d) * y * y + n;
      if (x2 > 0 && is_perfect_square(x2)) return QuadraticUnit{isqrt(x2), BigInt(y), n / 4};
    }
  }
  return std::nullopt;
}

CharacterGroup biquadratic_group(long d1, long d2) {
  CharacterGroup cg;
  cg.galois_type = GaloisType::Biquadratic;
  const BigInt dplus = fundamental_discriminant(BigInt(d1 * d2));
  cg.characters = {DirichletCharacter::trivial(), DirichletCharacter::kronecker(dplus),
                   DirichletCharacter::kronecker(BigInt(d1)), DirichletCharacter::kronecker(BigInt(d2))};
  cg.delta_kplus = dplus;
  cg.delta_k = dplus * d1 * d2;
  cg.imaginary_discriminants = std::array<BigInt, 2>{BigInt(std::min(d1, d2)), BigInt(std::max(d1, d2))};
  return cg;
}

const BigFloat kPi = boost::math::constants::pi<BigFloat>();

}  // namespace

TEST_CASE("L(1, chi_-4) = pi / 4 to 40 digits") {
  const BigComplex l = l_value_at_one(DirichletCharacter::kronecker(BigInt(-4)));
  CHECK(abs(l.re - kPi / 4) < BigFloat("1e-40"));
  CHECK(abs(l.im) < BigFloat("1e-40"));
}

TEST_CASE("Bernoulli numbers") {
  const GaussianRational b = bernoulli_b1(DirichletCharacter::kronecker(BigInt(-4)));
  CHECK(b.re == make_rational(BigInt(-1), BigInt(2)));
  CHECK(b.im == 0);
  // B1 = -h / (w/2) for an imaginary quadratic character.
  CHECK(bernoulli_b1(DirichletCharacter::kronecker(BigInt(-23))).re == -3);
  CHECK(bernoulli_b1(DirichletCharacter::kronecker(BigInt(-3))).re == make_rational(BigInt(-1), BigInt(3)));
  CHECK_THROWS_AS(bernoulli_b1(DirichletCharacter::trivial()), Error);
  CHECK_THROWS_AS(l_value_at_one(DirichletCharacter::kronecker(BigInt(5))), Error);
}

TEST_CASE("imaginary quadratic class numbers") {
  CHECK(imag_quadratic_h(BigInt(-3)) == 1);
  CHECK(imag_quadratic_h(BigInt(-4)) == 1);
  CHECK(imag_quadratic_h(BigInt(-23)) == 3);
  CHECK(imag_quadratic_h(BigInt(-47)) == 5);
  CHECK(imag_quadratic_h(BigInt(-163)) == 1);
  CHECK(imag_quadratic_h(BigInt(-84)) == 4);
  CHECK_THROWS_AS(imag_quadratic_h(BigInt(-12)), Error);
  CHECK(quadratic_roots_of_unity(BigInt(-3)) == 6);
  CHECK(quadratic_roots_of_unity(BigInt(-4)) == 4);
  CHECK(quadratic_roots_of_unity(BigInt(-7)) == 2);
}

TEST_CASE("Gauss-sum L-values agree with form counts") {
  int checked = 0;
  for (long d = -3; d > -400; --d) {
    if (!is_fundamental_discriminant(BigInt(d))) continue;
    const BigComplex l = l_value_at_one(DirichletCharacter::kronecker(BigInt(d)));
    CHECK_MESSAGE(abs(l.re - quadratic_l_value_from_forms(BigInt(d))) < BigFloat("1e-40"), d);
    CHECK(abs(l.im) < BigFloat("1e-40"));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("Euler products approach the L-value") {
  const auto w = WeilPolynomial::make(61, 1, -29, 331);
  const CharacterGroup cg = identify_characters(w);
  for (const auto& chi : cg.s_k()) {
    const BigComplex l = l_value_at_one(chi);
    const std::complex<double> e = euler_product(chi, 1000000);
    CHECK(std::abs(e - std::complex<double>(to_double(l.re), to_double(l.im))) < 2e-3);
  }
  const std::complex<double> e4 = euler_product(DirichletCharacter::kronecker(BigInt(-4)), 1000000);
  CHECK(e4.real() == doctest::Approx(std::numbers::pi / 4).epsilon(1e-3));
}

TEST_CASE("fundamental units agree with a direct search") {
  const QuadraticUnit u5 = fundamental_unit(BigInt(5));
  CHECK(u5.x == 1);
  CHECK(u5.y == 1);
  CHECK(u5.norm == -1);
  const QuadraticUnit u12 = fundamental_unit(BigInt(12));
  CHECK(u12.x == 4);
  CHECK(u12.y == 1);
  CHECK(u12.norm == 1);
  constexpr long kLimit = 200000;
  for (long d = 5; d < 700; ++d) {
    if (!is_fundamental_discriminant(BigInt(d))) continue;
    const QuadraticUnit u = fundamental_unit(BigInt(d));
    CHECK(u.x * u.x - BigInt(d) * u.y * u.y == 4 * u.norm);
    const auto b = brute_unit(d, u.y <= kLimit ? u.y.get_si() : kLimit);
    if (u.y > kLimit) {
      CHECK_FALSE(b.has_value());
      continue;
    }
    REQUIRE_MESSAGE(b.has_value(), d);
    CHECK(u.x == b->x);
    CHECK(u.y == b->y);
    CHECK(u.norm == b->norm);
  }
  CHECK_THROWS_AS(fundamental_unit(BigInt(9)), Error);
}

TEST_CASE("roots of unity of K") {
  CHECK(omega_K(identify_characters(WeilPolynomial::make(61, 1, -29, 331))) == 10);
  CHECK(omega_K(biquadratic_group(-4, -3)) == 12);
  CHECK(omega_K(biquadratic_group(-8, -4)) == 8);
  CHECK(omega_K(biquadratic_group(-4, -11)) == 4);
  CHECK(omega_K(biquadratic_group(-3, -23)) == 6);
  CHECK(omega_K(biquadratic_group(-7, -8)) == 2);
}

TEST_CASE("Hasse unit index on cyclotomic fields") {
  // Q(zeta_n) has Q = 1 for prime powers n and Q = 2 otherwise.
  CHECK(hasse_unit_index(biquadratic_group(-4, -3)) == 2);
  CHECK(hasse_unit_index(biquadratic_group(-8, -4)) == 1);
  CHECK(hasse_unit_index(identify_characters(WeilPolynomial::make(61, 1, -29, 331))) == 1);
}

TEST_CASE("Hasse unit index of Q(i, sqrt 11)") {
  // All three quadratic subfields have class number 1, so h(K) = Q / 2 forces Q = 2.
  CHECK(imag_quadratic_h(BigInt(-4)) == 1);
  CHECK(imag_quadratic_h(BigInt(-11)) == 1);
  const auto w = WeilPolynomial::make(3, 1, 0, -5);
  const CharacterGroup cg = identify_characters(w);
  REQUIRE(cg.imaginary_discriminants.has_value());
  CHECK((*cg.imaginary_discriminants)[0] == -11);
  CHECK((*cg.imaginary_discriminants)[1] == -4);
  CHECK(hasse_unit_index(cg) == 2);
  const ClassNumberData cn = relative_class_number(w, cg);
  CHECK(cn.h_rel == 1);
  CHECK(cn.unit_index == 2);
  CHECK(cn.euler_limit == make_rational(BigInt(1), BigInt(8)));
  CHECK(cn.rhs_mass == make_rational(BigInt(1), BigInt(4)));
}

TEST_CASE("relative class number of the p = 61 example") {
  const auto w = WeilPolynomial::make(61, 1, -29, 331);
  const ClassNumberData cn = relative_class_number(w, identify_characters(w));
  CHECK(cn.omega_k == 10);
  CHECK(cn.unit_index == 1);
  CHECK(cn.h_rel == 1);
  CHECK(cn.rhs_mass == make_rational(BigInt(1), BigInt(10)));
  CHECK(cn.integrality_gap < 1e-30);
}

TEST_CASE("Herglotz relation on biquadratic corpus members") {
  // h(K) / h(K+) = Q h(D1) h(D2) omega_K / (w1 w2), with h(K+) cancelling. The last factor is
  // 1/2 except for Q(zeta_8), where it is 1.
  int exceptional = 0;
  for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13}) {
    for (const auto& entry : enumerate_corpus(q)) {
      if (entry.galois_type != GaloisType::Biquadratic) continue;
      const CharacterGroup cg = identify_characters(entry.poly);
      const ClassNumberData cn = relative_class_number(entry.poly, cg);
      const auto& d = *cg.imaginary_discriminants;
      const int w1 = quadratic_roots_of_unity(d[0]), w2 = quadratic_roots_of_unity(d[1]);
      const BigInt hh = BigInt(cn.unit_index) * imag_quadratic_h(d[0]) * imag_quadratic_h(d[1]);
      CHECK_MESSAGE(cn.h_rel * w1 * w2 == hh * cn.omega_k, entry.poly.to_string());
      if (cn.omega_k == 8) {
        ++exceptional;
        CHECK(cn.h_rel == hh);
      } else {
        CHECK(2 * cn.h_rel == hh);
      }
      REQUIRE(cn.h_rel_from_forms.has_value());
      CHECK(*cn.h_rel_from_forms == cn.h_rel);
    }
  }
  CHECK(exceptional > 0);
}

TEST_CASE("verify_mass on the p = 61 example passes every gate") {
  const MassReport rep = verify_mass(WeilPolynomial::make(61, 1, -29, 331), {1000, 10000, 100000});
  CHECK(rep.pass());
  REQUIRE(rep.convergence.size() == 3);
  CHECK(rep.convergence[0].log_error > rep.convergence[1].log_error);
  CHECK(rep.convergence[1].log_error > rep.convergence[2].log_error);
  CHECK(rep.convergence[2].log_error < 1e-3);
}

TEST_CASE("verify_mass reports the unit index gap instead of passing") {
  const MassReport rep = verify_mass(WeilPolynomial::make(3, 1, 0, -5), {1000, 10000});
  CHECK(rep.validation_ok);
  CHECK(rep.integrality_ok);
  CHECK_FALSE(rep.convergence_ok);
  CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("verify_mass flags invalid input") {
  const MassReport rep = verify_mass(WeilPolynomial::make(5, 1, 1, 5), {1000});
  CHECK_FALSE(rep.validation_ok);
  CHECK(rep.failure == ErrorKind::Validation);
}
