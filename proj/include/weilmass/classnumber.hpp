#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weilmass/characters.hpp"
#include "weilmass/localfactors.hpp"
#include "weilmass/weil.hpp"

namespace weilmass {

struct GaussianRational {
  BigRational re;
  BigRational im;
  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
};

struct BigComplex {
  BigFloat re;
  BigFloat im;
};

BigComplex operator*(const BigComplex& x, const BigComplex& y);
BigFloat abs(const BigComplex& z);

/// Number of roots of unity in K, read off the character group.
int omega_K(const CharacterGroup& cg);

/// (1/f) sum_{a=1}^{f} chi(a) a. Trivial characters are rejected.
GaussianRational bernoulli_b1(const DirichletCharacter& chi);

/// sum_{a=1}^{f} chi(a) exp(2 pi i a / f).
BigComplex gauss_sum(const DirichletCharacter& chi);

/// L(1, chi) = (pi i tau(chi) / f) B_{1, conj chi} for odd primitive chi; even or trivial
/// characters throw ErrorKind::InvalidArgument.
BigComplex l_value_at_one(const DirichletCharacter& chi);

/// prod_{ell < bound} (1 - chi(ell)/ell)^{-1}.
std::complex<double> euler_product(const DirichletCharacter& chi, std::uint32_t bound);

/// Reduced forms (a, b, c) of discriminant D < 0: |b| <= a <= c, b >= 0 when |b| = a or a = c.
std::uint64_t imag_quadratic_h(const BigInt& d);

/// Roots of unity in Q(sqrt D).
int quadratic_roots_of_unity(const BigInt& d);

/// 2 pi h(D) / (w_D sqrt|D|).
BigFloat quadratic_l_value_from_forms(const BigInt& d);

/// (x + y sqrt D) / 2 with x^2 - D y^2 = 4 norm.
struct QuadraticUnit {
  BigInt x;
  BigInt y;
  int norm = 1;
};

/// Fundamental unit of the real quadratic order of discriminant D > 0, by continued fractions.
QuadraticUnit fundamental_unit(const BigInt& d);

/// Q = [E_K : mu_K E_{K+}] in {1, 2}. Q = 2 exactly when zeta * eps is a square in K for some
/// root of unity zeta; with N(eps) = 1 this reduces to rational square-class tests through
/// eps (2 + Tr eps) = (1 + eps)^2.
int hasse_unit_index(const CharacterGroup& cg);

struct ClassNumberData {
  int omega_k = 2;
  int unit_index = 1;
  std::vector<BigComplex> l_values;
  /// Q omega_K nu_inf prod L(1, chi) before rounding.
  BigFloat h_rel_approx;
  /// Distance from h_rel_approx to the nearest integer.
  double integrality_gap = 0;
  BigInt h_rel;
  /// h_rel / omega_K.
  BigRational rhs_mass;
  /// nu_inf prod_ell nu_ell = h_rel / (Q omega_K): the limit of the partial products.
  BigRational euler_limit;
  /// Biquadratic only: the same product with each L-value taken from reduced-form counts.
  std::optional<BigInt> h_rel_from_forms;
};

inline constexpr double kIntegralityTolerance = 1e-6;

/// Throws ErrorKind::Integrality when h_rel misses an integer by more than the tolerance or is
/// not positive, and ErrorKind::OracleMismatch when the form-count route disagrees.
ClassNumberData relative_class_number(const WeilPolynomial& w, const CharacterGroup& cg);

struct ConvergenceRow {
  std::uint64_t cutoff = 0;
  BigFloat value;
  /// |log(P(X) / rhs_mass)|
  double log_error = 0;
};

struct MassReport {
  WeilPolynomial poly;
  ValidationReport validation;
  std::optional<CharacterGroup> characters;
  std::optional<ClassNumberData> class_numbers;
  std::vector<ConvergenceRow> convergence;
  bool validation_ok = false;
  bool matching_ok = false;
  bool integrality_ok = false;
  bool convergence_ok = false;
  bool ell2_disagreement = false;
  /// First failure class met, for exit-code mapping.
  std::optional<ErrorKind> failure;
  std::vector<std::string> notes;

  bool pass() const { return validation_ok && matching_ok && integrality_ok && convergence_ok; }
};

/// validate -> identify -> local factors -> partial products -> rhs mass. Gate failures are
/// recorded in the report rather than thrown, except for invalid arguments.
MassReport verify_mass(const WeilPolynomial& w, const std::vector<std::uint64_t>& cutoffs,
                       const IdentifyOptions& opts = {});

}  // namespace weilmass
