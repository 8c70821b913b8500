#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "weilmass/localfactors.hpp"

namespace weilmass {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 15;

constexpr double kPi = std::numbers::pi;

// For fixed a the Weil region in b is [lo, hi] with lo = 2|a| sqrt q - 2q, hi = a^2/4 + 2q.
struct Fiber {
  double lo, hi, lo2;
};

Fiber fiber_at(double a, double q) {
  const double s = std::sqrt(q);
  return {2 * std::abs(a) * s - 2 * q, a * a / 4 + 2 * q, -2 * std::abs(a) * s - 2 * q};
}

// Mass of {b0 <= b <= b1} on the fiber over a. With b = lo + D (1 - cos t) / 2 the two square
// root endpoints cancel against db and the integrand in t is smooth.
double fiber_mass(double a, double q, double b0, double b1) {
  const Fiber fb = fiber_at(a, q);
  const double d = fb.hi - fb.lo;
  if (d <= 0) return 0;
  const double lo = std::max(b0, fb.lo);
  const double hi = std::min(b1, fb.hi);
  if (hi <= lo) return 0;
  auto t_of = [&](double b) { return std::acos(std::clamp(1 - 2 * (b - fb.lo) / d, -1.0, 1.0)); };
  const double scale = 1 / (4 * q * q * q * kPi * kPi);
  auto integrand = [&](double t) {
    const double st = std::sin(t);
    const double b = fb.lo + d * (1 - std::cos(t)) / 2;
    return scale * d * st * std::sqrt(std::max(0.0, b - fb.lo2)) * (d / 2) * st;
  };
  return Quad::integrate(integrand, t_of(lo), t_of(hi), kMaxDepth, 1e-12);
}

}  // namespace

double sato_tate_angle_density(double t1, double t2) {
  if (t1 < 0 || t2 > kPi || t1 > t2) return 0;
  const double d = std::cos(t2) - std::cos(t1);
  const double s1 = std::sin(t1);
  const double s2 = std::sin(t2);
  return 16 / (kPi * kPi) * d * d * s1 * s1 * s2 * s2;
}

double sato_tate_weil_density(double a, double b, double q) {
  if (q <= 0) return 0;
  const Fiber fb = fiber_at(a, q);
  if (std::abs(a) > 4 * std::sqrt(q) || b < fb.lo || b > fb.hi) return 0;
  const double u = a * a - 4 * b + 8 * q;
  const double v = b * b + 4 * b * q + 4 * q * q - 4 * a * a * q;
  return std::sqrt(std::max(0.0, u * v)) / (4 * q * q * q * kPi * kPi);
}

double angle_density_total(double tol) {
  auto inner = [&](double t1) {
    return Quad::integrate([&](double t2) { return sato_tate_angle_density(t1, t2); }, t1, kPi, kMaxDepth, tol);
  };
  return Quad::integrate(inner, 0.0, kPi, kMaxDepth, tol);
}

SatoTateGrid empty_grid(double q, int na, int nb) {
  if (q <= 0 || na <= 0 || nb <= 0) throw Error(ErrorKind::InvalidArgument, "Sato-Tate grid: bad dimensions");
  SatoTateGrid g;
  g.q = q;
  g.na = na;
  g.nb = nb;
  g.a_min = -4 * std::sqrt(q);
  g.a_max = 4 * std::sqrt(q);
  g.b_min = -2 * q;
  g.b_max = 6 * q;
  g.values.assign(static_cast<std::size_t>(na) * nb, 0.0);
  return g;
}

SatoTateGrid weil_density_cell_mass(double q, int na, int nb) {
  SatoTateGrid g = empty_grid(q, na, nb);
  const double da = (g.a_max - g.a_min) / na;
  const double db = (g.b_max - g.b_min) / nb;
  for (int ia = 0; ia < na; ++ia) {
    const double a0 = g.a_min + ia * da;
    for (int ib = 0; ib < nb; ++ib) {
      const double b0 = g.b_min + ib * db;
      g.values[static_cast<std::size_t>(ia) * nb + ib] =
          Quad::integrate([&](double a) { return fiber_mass(a, q, b0, b0 + db); }, a0, a0 + da, kMaxDepth, 1e-11);
    }
  }
  return g;
}

SatoTateGrid monte_carlo_pushforward(double q, int na, int nb, std::uint64_t samples, std::uint64_t seed) {
  SatoTateGrid g = empty_grid(q, na, nb);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // The density is symmetric in (t1, t2), so unordered uniform proposals suffice. Relative to
  // the uniform density on the triangle it equals 8 (c2 - c1)^2 s1^2 s2^2 <= 128/27.
  const double s = std::sqrt(q);
  const double inv_da = na / (g.a_max - g.a_min);
  const double inv_db = nb / (g.b_max - g.b_min);
  for (std::uint64_t n = 0; n < samples;) {
    const double c1 = std::cos(angle(rng));
    const double c2 = std::cos(angle(rng));
    const double w = (c2 - c1) * (c2 - c1) * (1 - c1 * c1) * (1 - c2 * c2);
    if (unit(rng) * (16.0 / 27.0) >= w) continue;
    ++n;
    const double a = 2 * s * (c1 + c2);
    const double b = 2 * q + 4 * q * c1 * c2;
    const int ia = std::clamp(static_cast<int>((a - g.a_min) * inv_da), 0, na - 1);
    const int ib = std::clamp(static_cast<int>((b - g.b_min) * inv_db), 0, nb - 1);
    g.values[static_cast<std::size_t>(ia) * nb + ib] += 1;
  }
  return g;
}

SatoTateComparison compare_grids(const SatoTateGrid& mass, const SatoTateGrid& counts, std::uint64_t samples,
                                 double z_limit) {
  if (mass.values.size() != counts.values.size() || mass.nb != counts.nb)
    throw Error(ErrorKind::InvalidArgument, "compare_grids: grid shapes differ");
  SatoTateComparison out;
  out.samples = samples;
  const double n = static_cast<double>(samples);
  for (int ia = 0; ia < mass.na; ++ia) {
    for (int ib = 0; ib < mass.nb; ++ib) {
      const std::size_t k = static_cast<std::size_t>(ia) * mass.nb + ib;
      const double p = mass.values[k];
      const double c = counts.values[k];
      if (p <= 0) {
        if (c > 0) ++out.stray_cells;
        continue;
      }
      const double z = std::abs(c - n * p) / std::sqrt(n * p * (1 - p));
      if (z > z_limit) ++out.cells_over;
      if (z > out.max_abs_z) {
        out.max_abs_z = z;
        out.worst_ia = ia;
        out.worst_ib = ib;
      }
    }
  }
  return out;
}

}  // namespace weilmass
