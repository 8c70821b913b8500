#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "weilmass/characters.hpp"
#include "weilmass/gsp4/shape.hpp"
#include "weilmass/weil.hpp"

namespace weilmass {

/// 50 decimal digits.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

BigFloat to_bigfloat(const BigRational& x);
BigFloat to_bigfloat(const BigInt& x);

enum class FactorPath { Shape, Character, Oracle, Formula, Archimedean };

std::string to_string(FactorPath path);

/// ell^2 (ell - 1) / #Z summed over the cyclic classes of the shape: 1/2 + 1/2 for DRL-S and RQ-2.
BigRational nu_from_shape(gsp4::ShapeKind kind, std::uint64_t ell);

struct LocalFactor {
  std::uint64_t ell = 0;  ///< 0 for the archimedean place
  std::optional<gsp4::ShapeKind> shape;
  BigRational value;
  FactorPath path = FactorPath::Shape;
  /// Value by the other finite-place route, when computed.
  std::optional<BigRational> cross_check;
  bool disagreement() const { return cross_check && *cross_check != value; }
};

/// Shape path only; ell != p.
BigRational nu_ell_shape(const WeilPolynomial& w, std::uint64_t ell);

/// nu_ell(f) for ell != p: shape path for odd ell, character path at ell = 2 (with the shape
/// value kept as the cross-check there, and the character value as the cross-check elsewhere).
LocalFactor nu_ell(const WeilPolynomial& w, std::uint64_t ell, const CharacterGroup& cg);

/// p^2/(p-1)^2 when T^2 - aT + b splits mod p with distinct roots, p^2/(p^2-1) when it is
/// irreducible; ErrorKind::Validation on a repeated root.
BigRational nu_p(const WeilPolynomial& w);

/// 1/(q 4 pi^2) sqrt|disc f / disc f+|.
BigFloat nu_infinity(const WeilPolynomial& w);
/// 1/(4 pi^2) sqrt|disc K / disc K+|.
BigFloat nu_infinity_field(const CharacterGroup& cg);

struct PartialProduct {
  std::uint64_t cutoff = 0;
  BigFloat value;
  /// Odd places below this cutoff where the shape and character values differ.
  std::size_t disagreements = 0;
  /// Reported, not gated: at ell = 2 the shape value is only a cross-check.
  bool ell2_disagreement = false;
};

/// P(X) = nu_inf * nu_p [p < X] * prod_{ell < X, ell != p} nu_ell, primes taken in increasing
/// order. Cutoffs must be strictly increasing.
std::vector<PartialProduct> partial_products(const WeilPolynomial& w, const CharacterGroup& cg,
                                             const std::vector<std::uint64_t>& cutoffs);

// Sato-Tate measure for abelian surfaces.

/// Density on 0 <= t1 <= t2 <= pi; 0 elsewhere.
double sato_tate_angle_density(double t1, double t2);
/// Density in (a, b) for f(T) = T^4 - a T^3 + b T^2 - a q T + q^2; 0 outside the Weil region.
double sato_tate_weil_density(double a, double b, double q);

/// Adaptive quadrature of the angle density over its triangle.
double angle_density_total(double tol = 1e-10);

struct SatoTateGrid {
  double q = 1;
  int na = 20;
  int nb = 20;
  double a_min = 0, a_max = 0, b_min = 0, b_max = 0;
  /// Row-major [ia * nb + ib].
  std::vector<double> values;
};

/// Grid covering |a| <= 4 sqrt q, -2q <= b <= 6q.
SatoTateGrid empty_grid(double q, int na, int nb);

/// Probability mass of the (a, b) density in each cell.
SatoTateGrid weil_density_cell_mass(double q, int na, int nb);

/// Counts of (a, b) images of angle pairs drawn from the angle density by rejection sampling.
SatoTateGrid monte_carlo_pushforward(double q, int na, int nb, std::uint64_t samples, std::uint64_t seed);

struct SatoTateComparison {
  std::uint64_t samples = 0;
  double max_abs_z = 0;
  int cells_over = 0;
  /// Cells with zero predicted mass that received samples.
  int stray_cells = 0;
  int worst_ia = -1;
  int worst_ib = -1;
};

SatoTateComparison compare_grids(const SatoTateGrid& mass, const SatoTateGrid& counts, std::uint64_t samples,
                                 double z_limit = 3.0);

}  // namespace weilmass
