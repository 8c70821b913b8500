#include "weilmass/localfactors.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "weilmass/fppoly.hpp"

namespace weilmass {

namespace {

BigRational ratio(const BigInt& num, const BigInt& den) { return make_rational(num, den); }

BigFloat four_pi_squared() {
  const BigFloat pi = boost::math::constants::pi<BigFloat>();
  return 4 * pi * pi;
}

}  // namespace

BigFloat to_bigfloat(const BigInt& x) { return BigFloat(x.get_str()); }

BigFloat to_bigfloat(const BigRational& x) { return to_bigfloat(x.get_num()) / to_bigfloat(x.get_den()); }

std::string to_string(FactorPath path) {
  switch (path) {
    case FactorPath::Shape: return "shape";
    case FactorPath::Character: return "character";
    case FactorPath::Oracle: return "oracle";
    case FactorPath::Formula: return "formula";
    case FactorPath::Archimedean: return "archimedean";
  }
  return "?";
}

BigRational nu_from_shape(gsp4::ShapeKind kind, std::uint64_t ell) {
  // Each cyclic class with the given semisimplification contributes ell^2 (ell - 1) / #Z.
  const BigInt l(static_cast<unsigned long>(ell));
  const int classes = gsp4::has_two_classes(kind) ? 2 : 1;
  return ratio(classes * l * l * (l - 1), gsp4::centralizer_order_formula(kind, ell));
}

BigRational nu_ell_shape(const WeilPolynomial& w, std::uint64_t ell) {
  if (static_cast<std::int64_t>(ell) == w.p) throw Error(ErrorKind::InvalidArgument, "nu_ell: ell = p, use nu_p");
  const auto shape = gsp4::frobenius_shape(w, static_cast<std::uint32_t>(ell));
  return nu_from_shape(shape.kind, ell);
}

LocalFactor nu_ell(const WeilPolynomial& w, std::uint64_t ell, const CharacterGroup& cg) {
  if (static_cast<std::int64_t>(ell) == w.p) throw Error(ErrorKind::InvalidArgument, "nu_ell: ell = p, use nu_p");
  LocalFactor out;
  out.ell = ell;
  const BigRational by_character = nu_ell_K(cg, ell);
  if (ell == 2) {
    out.value = by_character;
    out.path = FactorPath::Character;
    // The square-class bookkeeping behind the shapes degenerates in characteristic 2, so the
    // shape value is informative only when a pattern is recognised at all.
    try {
      out.shape = gsp4::frobenius_shape(w, 2).kind;
      out.cross_check = nu_from_shape(*out.shape, 2);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Validation) throw;
    }
    return out;
  }
  out.shape = gsp4::frobenius_shape(w, static_cast<std::uint32_t>(ell)).kind;
  out.value = nu_from_shape(*out.shape, ell);
  out.path = FactorPath::Shape;
  out.cross_check = by_character;
  return out;
}

BigRational nu_p(const WeilPolynomial& w) {
  const std::uint64_t p = static_cast<std::uint64_t>(w.p);
  const std::array<std::int64_t, 3> g{w.b, -w.a, 1};
  const auto factors = factor_mod_ell(std::span<const std::int64_t>(g), p);
  const BigInt bp(static_cast<unsigned long>(p));
  if (factors.size() == 2) return ratio(bp * bp, (bp - 1) * (bp - 1));
  if (factors.size() == 1 && factors[0].multiplicity == 1) return ratio(bp * bp, bp * bp - 1);
  throw Error(ErrorKind::Validation, "nu_p: T^2 - aT + b has a repeated root mod p");
}

BigFloat nu_infinity(const WeilPolynomial& w) {
  const auto inv = invariants(w);
  const BigRational r = ratio(abs(inv.delta_f), abs(inv.delta_fplus));
  return sqrt(to_bigfloat(r)) / (BigFloat(w.q) * four_pi_squared());
}

BigFloat nu_infinity_field(const CharacterGroup& cg) {
  const BigRational r = ratio(abs(cg.delta_k), abs(cg.delta_kplus));
  return sqrt(to_bigfloat(r)) / four_pi_squared();
}

std::vector<PartialProduct> partial_products(const WeilPolynomial& w, const CharacterGroup& cg,
                                             const std::vector<std::uint64_t>& cutoffs) {
  if (std::adjacent_find(cutoffs.begin(), cutoffs.end(), std::greater_equal<>()) != cutoffs.end())
    throw Error(ErrorKind::InvalidArgument, "partial_products: cutoffs must be strictly increasing");
  std::vector<PartialProduct> out;
  if (cutoffs.empty()) return out;
  if (cutoffs.back() > 0xffffffffull) throw Error(ErrorKind::InvalidArgument, "partial_products: cutoff too large");

  const auto primes = primes_below(static_cast<std::uint32_t>(cutoffs.back()));
  BigFloat acc = nu_infinity(w);
  std::size_t disagreements = 0;
  bool ell2_disagreement = false;
  std::size_t k = 0;
  for (const std::uint64_t x : cutoffs) {
    for (; k < primes.size() && primes[k] < x; ++k) {
      const std::uint64_t ell = primes[k];
      if (static_cast<std::int64_t>(ell) == w.p) {
        acc *= to_bigfloat(nu_p(w));
        continue;
      }
      const LocalFactor f = nu_ell(w, ell, cg);
      if (f.disagreement()) {
        if (ell == 2)
          ell2_disagreement = true;
        else
          ++disagreements;
      }
      acc *= to_bigfloat(f.value);
    }
    out.push_back({x, acc, disagreements, ell2_disagreement});
  }
  return out;
}

}  // namespace weilmass
