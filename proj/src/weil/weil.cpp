#include "weilmass/weil.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "weilmass/characters.hpp"

namespace weilmass {

WeilPolynomial WeilPolynomial::make(std::int64_t p, int e, std::int64_t a, std::int64_t b) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(ErrorKind::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
  }
  if (e < 1) throw Error(ErrorKind::InvalidArgument, "exponent e must be >= 1");
  std::int64_t q = 1;
  for (int i = 0; i < e; ++i) {
    if (q > (std::int64_t{1} << 31) / p) throw Error(ErrorKind::InvalidArgument, "q = p^e exceeds 2^31");
    q *= p;
  }
  return WeilPolynomial{p, e, q, a, b};
}

WeilPolynomial WeilPolynomial::from_displayed(std::int64_t p, int e, std::int64_t c3, std::int64_t c2) {
  return make(p, e, -c3, c2);
}

std::array<BigInt, 5> WeilPolynomial::coefficients() const {
  const BigInt bq(static_cast<long>(q)), ba(static_cast<long>(a)), bb(static_cast<long>(b));
  return {BigInt(bq * bq), BigInt(-ba * bq), bb, BigInt(-ba), BigInt(1)};
}

std::array<std::int64_t, 5> WeilPolynomial::small_coefficients() const { return {q * q, -a * q, b, -a, 1}; }

bool WeilPolynomial::in_weil_region() const {
  const BigInt bq(static_cast<long>(q)), ba(static_cast<long>(a)), bb(static_cast<long>(b));
  if (ba * ba > 16 * bq) return false;
  const BigInt shifted = bb + 2 * bq;
  if (shifted < 0) return false;
  if (4 * ba * ba * bq > shifted * shifted) return false;
  return 4 * bb <= ba * ba + 8 * bq;
}

std::string WeilPolynomial::to_string() const {
  std::ostringstream os;
  auto term = [&os](std::int64_t c, const char* mono, bool first) {
    if (c == 0) return;
    if (c < 0) {
      os << (first ? "-" : " - ");
    } else if (!first) {
      os << " + ";
    }
    const std::int64_t m = c < 0 ? -c : c;
    if (m != 1 || mono[0] == '\0') os << m;
    os << mono;
  };
  os << "T^4";
  term(-a, "T^3", false);
  term(b, "T^2", false);
  term(-a * q, "T", false);
  term(q * q, "", false);
  return os.str();
}

WeilInvariants invariants(const WeilPolynomial& w) {
  const BigInt q(static_cast<long>(w.q)), a(static_cast<long>(w.a)), b(static_cast<long>(w.b));
  WeilInvariants inv;
  inv.fplus_c1 = -a;
  inv.fplus_c0 = b - 2 * q;
  inv.delta_fplus = a * a - 4 * b + 8 * q;
  inv.norm_term = b * b + 4 * b * q + 4 * q * q - 4 * a * a * q;
  inv.delta_order = inv.delta_fplus * inv.delta_fplus * inv.norm_term;
  inv.delta_f = q * q * inv.delta_order;
  inv.conductor = q;
  return inv;
}

BigInt quartic_discriminant(const std::array<BigInt, 5>& c) {
  // x^4 + b x^3 + c x^2 + d x + e
  const BigInt& e = c[0];
  const BigInt& d = c[1];
  const BigInt& cc = c[2];
  const BigInt& b = c[3];
  BigInt r = 256 * e * e * e;
  r -= 192 * b * d * e * e;
  r -= 128 * cc * cc * e * e;
  r += 144 * cc * d * d * e;
  r -= 27 * d * d * d * d;
  r += 144 * b * b * cc * e * e;
  r -= 6 * b * b * d * d * e;
  r -= 80 * b * cc * cc * d * e;
  r += 18 * b * cc * d * d * d;
  r += 16 * cc * cc * cc * cc * e;
  r -= 4 * cc * cc * cc * d * d;
  r -= 27 * b * b * b * b * e * e;
  r += 18 * b * b * b * cc * d * e;
  r -= 4 * b * b * b * d * d * d;
  r -= 4 * b * b * cc * cc * cc * e;
  r += b * b * cc * cc * d * d;
  return r;
}

std::string to_string(GaloisType t) {
  switch (t) {
    case GaloisType::Cyclic4: return "cyclic";
    case GaloisType::Biquadratic: return "biquadratic";
    case GaloisType::NotAbelianGalois: return "not_abelian_galois";
  }
  return "?";
}

GaloisType galois_type_from_string(const std::string& s) {
  if (s == "cyclic") return GaloisType::Cyclic4;
  if (s == "biquadratic") return GaloisType::Biquadratic;
  if (s == "not_abelian_galois") return GaloisType::NotAbelianGalois;
  throw Error(ErrorKind::InvalidArgument, "unknown galois type " + s);
}

namespace {

BigInt eval_quartic(const std::array<BigInt, 5>& c, const BigInt& x) {
  BigInt acc = c[4];
  for (int i = 3; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

// Rational square, zero included.
bool is_square_or_zero(const BigInt& u) { return u == 0 || is_perfect_square(u); }

}  // namespace

bool is_irreducible_over_q(const WeilPolynomial& w) {
  const auto c = w.coefficients();
  // Every rational root and every constant term of a monic integer factor divides q^2 = p^(2e).
  std::vector<BigInt> v_candidates;
  BigInt pk = 1;
  for (int k = 0; k <= 2 * w.e; ++k) {
    v_candidates.push_back(pk);
    v_candidates.push_back(-pk);
    pk *= static_cast<long>(w.p);
  }
  for (const auto& r : v_candidates) {
    if (eval_quartic(c, r) == 0) return false;
  }
  const BigInt& c0 = c[0];
  const BigInt& c1 = c[1];
  const BigInt& c2 = c[2];
  const BigInt& c3 = c[3];
  for (const auto& v : v_candidates) {
    const BigInt vp = c0 / v;
    if (v * vp != c0) continue;
    if (v != vp) {
      // u (v' - v) = c1 - c3 v
      const BigInt num = c1 - c3 * v;
      const BigInt den = vp - v;
      if (num % den != 0) continue;
      const BigInt u = num / den;
      const BigInt up = c3 - u;
      if (v + vp + u * up == c2) return false;
    } else {
      if (c1 != c3 * v) continue;
      const BigInt disc = c3 * c3 - 4 * (c2 - 2 * v);
      if (disc < 0 || !is_perfect_square(disc)) continue;
      const BigInt s = isqrt(disc);
      if ((c3 + s) % 2 == 0) return false;
    }
  }
  return true;
}

GaloisType galois_type(const WeilPolynomial& w) {
  if (!is_irreducible_over_q(w)) {
    throw Error(ErrorKind::Validation, "f = " + w.to_string() + " is reducible over Q");
  }
  const auto c = w.coefficients();
  const BigInt& c0 = c[0];
  const BigInt& c1 = c[1];
  const BigInt& c2 = c[2];
  const BigInt& c3 = c[3];
  // R(y) = y^3 - c2 y^2 + (c1 c3 - 4 c0) y + (4 c0 c2 - c1^2 - c3^2 c0), roots r1 r2 + r3 r4 etc.
  const BigInt r1 = c1 * c3 - 4 * c0;
  const BigInt r0 = 4 * c0 * c2 - c1 * c1 - c3 * c3 * c0;
  std::vector<BigInt> roots;
  for (std::int64_t y = -2 * w.q; y <= 2 * w.q; ++y) {
    const BigInt by(static_cast<long>(y));
    if (((by - c2) * by + r1) * by + r0 == 0) roots.push_back(by);
  }
  if (roots.size() >= 2) return GaloisType::Biquadratic;
  if (roots.empty()) return GaloisType::NotAbelianGalois;
  const BigInt& r = roots.front();
  const BigInt disc = quartic_discriminant(c);
  // Kappe-Warren: cyclic iff x^2 - r x + c0 and x^2 + c3 x + (c2 - r) split over Q(sqrt(disc)).
  auto splits = [&disc](const BigInt& u) { return is_square_or_zero(u) || is_square_or_zero(u * disc); };
  const BigInt u1 = r * r - 4 * c0;
  const BigInt u2 = c3 * c3 - 4 * (c2 - r);
  return (splits(u1) && splits(u2)) ? GaloisType::Cyclic4 : GaloisType::NotAbelianGalois;
}

ValidationReport validate(const WeilPolynomial& w) {
  ValidationReport rep;
  rep.in_weil_region = w.in_weil_region();
  if (!rep.in_weil_region) rep.failures.emplace_back("coefficients outside the Weil region");

  rep.ordinary = std::gcd(w.b, w.p) == 1;
  if (!rep.ordinary) rep.failures.emplace_back("not ordinary: p divides the middle coefficient");

  const WeilInvariants inv = invariants(w);
  rep.delta_order = inv.delta_order;
  rep.unramified_at_p = mpz_divisible_ui_p(inv.delta_order.get_mpz_t(), static_cast<unsigned long>(w.p)) == 0;
  if (!rep.unramified_at_p) rep.failures.emplace_back("p divides the discriminant of O_f");

  if (!rep.in_weil_region) return rep;
  rep.irreducible = is_irreducible_over_q(w);
  if (!rep.irreducible) {
    rep.failures.emplace_back("reducible over Q");
    return rep;
  }
  rep.galois_type = galois_type(w);
  if (*rep.galois_type == GaloisType::NotAbelianGalois) {
    rep.failures.emplace_back("K_f is not Galois over Q");
    return rep;
  }
  try {
    const CharacterGroup cg = identify_characters(w);
    rep.delta_k = cg.delta_k;
    rep.maximal = abs(cg.delta_k) == abs(inv.delta_order);
    if (!rep.maximal) {
      rep.failures.emplace_back("Z[pi, pibar] is not maximal: |disc O_f| = " + inv.delta_order.get_str() +
                                " but |disc K| = " + cg.delta_k.get_str());
    }
  } catch (const Error& err) {
    rep.failures.emplace_back(std::string("character identification failed: ") + err.what());
  }
  return rep;
}

std::pair<std::int64_t, int> prime_power_decomposition(std::int64_t q) {
  if (q < 2) throw Error(ErrorKind::InvalidArgument, "q must be a prime power >= 2");
  const auto fac = factor_integer(BigInt(static_cast<long>(q)));
  if (fac.size() != 1) throw Error(ErrorKind::InvalidArgument, std::to_string(q) + " is not a prime power");
  return {fac[0].prime.get_si(), static_cast<int>(fac[0].exponent)};
}

std::vector<CorpusEntry> enumerate_corpus(std::int64_t q) {
  const auto [p, e] = prime_power_decomposition(q);
  std::vector<CorpusEntry> out;
  std::int64_t amax = 0;
  while ((amax + 1) * (amax + 1) <= 16 * q) ++amax;
  for (std::int64_t a = -amax; a <= amax; ++a) {
    const std::int64_t bmax = (a * a + 8 * q) / 4 + 1;
    for (std::int64_t b = -2 * q; b <= bmax; ++b) {
      const WeilPolynomial w = WeilPolynomial::make(p, e, a, b);
      if (!w.in_weil_region()) continue;
      if (std::gcd(b, p) != 1) continue;
      const WeilInvariants inv = invariants(w);
      if (inv.delta_order == 0) continue;
      if (mpz_divisible_ui_p(inv.delta_order.get_mpz_t(), static_cast<unsigned long>(p)) != 0) continue;
      if (!is_irreducible_over_q(w)) continue;
      const GaloisType type = galois_type(w);
      if (type == GaloisType::NotAbelianGalois) continue;
      const CharacterGroup cg = identify_characters(w);
      if (abs(cg.delta_k) != abs(inv.delta_order)) continue;
      out.push_back({w, type, inv.delta_order});
    }
  }
  return out;
}

std::string corpus_json_line(const CorpusEntry& entry) {
  nlohmann::ordered_json j;
  j["p"] = entry.poly.p;
  j["e"] = entry.poly.e;
  j["a"] = entry.poly.a;
  j["b"] = entry.poly.b;
  j["galois_type"] = to_string(entry.galois_type);
  if (entry.delta_order.fits_slong_p() != 0) {
    j["delta_order"] = entry.delta_order.get_si();
  } else {
    j["delta_order"] = entry.delta_order.get_str();
  }
  return j.dump();
}

}  // namespace weilmass
