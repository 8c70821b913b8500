#include "weilmass/classnumber.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>

namespace weilmass {

namespace {

BigFloat pi() { return boost::math::constants::pi<BigFloat>(); }

void require_nontrivial(const DirichletCharacter& chi, const char* what) {
  if (chi.conductor() == 1) throw Error(ErrorKind::InvalidArgument, std::string(what) + ": trivial character");
}

BigComplex gaussian(const CharValue& v) {
  const auto g = v.gaussian();
  return {BigFloat(g[0]), BigFloat(g[1])};
}

// x must already be integral.
BigInt to_bigint(const BigFloat& x) {
  std::string s = x.str(0, std::ios_base::fixed);
  if (const auto dot = s.find('.'); dot != std::string::npos) s.resize(dot);
  return BigInt(s);
}

bool same_set(const std::array<BigInt, 2>& d, long x, long y) {
  return (d[0] == x && d[1] == y) || (d[0] == y && d[1] == x);
}

}  // namespace

BigComplex operator*(const BigComplex& x, const BigComplex& y) {
  return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

BigFloat abs(const BigComplex& z) { return sqrt(z.re * z.re + z.im * z.im); }

int omega_K(const CharacterGroup& cg) {
  if (cg.galois_type == GaloisType::Cyclic4) {
    // The only cyclic quartic field with extra roots of unity is Q(zeta_5).
    const bool mod5 = std::all_of(cg.characters.begin() + 1, cg.characters.end(),
                                  [](const DirichletCharacter& c) { return c.conductor() == 5; });
    return mod5 ? 10 : 2;
  }
  if (!cg.imaginary_discriminants) return 2;
  const auto& d = *cg.imaginary_discriminants;
  if (same_set(d, -8, -4)) return 8;
  if (same_set(d, -4, -3)) return 12;
  if (d[0] == -3 || d[1] == -3) return 6;
  if (d[0] == -4 || d[1] == -4) return 4;
  return 2;
}

QuadraticUnit fundamental_unit(const BigInt& d) {
  if (d <= 1 || is_perfect_square(d)) throw Error(ErrorKind::InvalidArgument, "fundamental_unit: D must be a positive nonsquare");
  const bool odd = mpz_odd_p(d.get_mpz_t()) != 0;
  if (!odd && mpz_divisible_ui_p(d.get_mpz_t(), 4) == 0)
    throw Error(ErrorKind::InvalidArgument, "fundamental_unit: D must be 0 or 1 mod 4");
  // Expand (P + sqrt R) / Q from sqrt(D/4) or (1 + sqrt D)/2 until Q returns to its start value.
  const BigInt radicand = odd ? BigInt(d) : BigInt(d / 4);
  const BigInt q0 = odd ? 2 : 1;
  const BigInt root = isqrt(radicand);
  BigInt pp = odd ? 1 : 0, qq = q0;
  BigInt p_prev = 0, p_cur = 1, q_prev = 1, q_cur = 0;
  for (;;) {
    const BigInt a = (pp + root) / qq;
    const BigInt p_next = a * p_cur + p_prev;
    const BigInt q_next = a * q_cur + q_prev;
    p_prev = p_cur;
    p_cur = p_next;
    q_prev = q_cur;
    q_cur = q_next;
    pp = a * qq - pp;
    qq = (radicand - pp * pp) / qq;
    if (qq == q0) break;
  }
  QuadraticUnit u;
  if (odd) {
    u.x = 2 * p_cur - q_cur;
    u.y = q_cur;
  } else {
    u.x = 2 * p_cur;
    u.y = q_cur;
  }
  const BigInt n4 = u.x * u.x - d * u.y * u.y;
  if (n4 != 4 && n4 != -4) throw Error(ErrorKind::OracleMismatch, "fundamental_unit: continued fraction did not close");
  u.norm = n4 > 0 ? 1 : -1;
  return u;
}

int hasse_unit_index(const CharacterGroup& cg) {
  const QuadraticUnit eps = fundamental_unit(cg.delta_kplus);
  if (eps.norm == -1) return 1;
  // Rational square classes that become squares in K.
  std::vector<BigInt> classes{BigInt(1), cg.delta_kplus};
  if (cg.imaginary_discriminants)
    for (const auto& d : *cg.imaginary_discriminants) classes.push_back(d);
  auto square_in_k = [&](const BigInt& r) {
    return std::any_of(classes.begin(), classes.end(), [&](const BigInt& s) {
      const BigInt prod = r * s;
      return prod > 0 && is_perfect_square(prod);
    });
  };
  // eps = (1 + eps)^2 / (2 + Tr eps), so zeta eps is a square iff zeta (2 + Tr eps) is. Modulo
  // squares mu_K is {1, -1} or, when i lies in K, {1, i} with i = (1 + i)^2 / 2.
  const BigInt n = 2 + eps.x;
  const int omega = omega_K(cg);
  const bool has_i = omega % 4 == 0;
  if (square_in_k(n) || square_in_k(-n)) return 2;
  if (has_i && square_in_k(2 * n)) return 2;
  return 1;
}

GaussianRational bernoulli_b1(const DirichletCharacter& chi) {
  require_nontrivial(chi, "B1");
  const std::uint64_t f = chi.conductor();
  BigInt re = 0, im = 0;
  for (std::uint64_t a = 1; a <= f; ++a) {
    const auto g = chi.at(a).gaussian();
    const BigInt ba(static_cast<unsigned long>(a));
    re += g[0] * ba;
    im += g[1] * ba;
  }
  const BigInt bf(static_cast<unsigned long>(f));
  return {make_rational(re, bf), make_rational(im, bf)};
}

BigComplex gauss_sum(const DirichletCharacter& chi) {
  const std::uint64_t f = chi.conductor();
  const BigFloat theta = 2 * pi() / BigFloat(f);
  // Powers of a single root; 50-digit arithmetic absorbs the accumulated rounding.
  const BigComplex step{cos(theta), sin(theta)};
  BigComplex zeta = step;
  BigComplex sum{0, 0};
  for (std::uint64_t a = 1; a <= f; ++a, zeta = zeta * step) {
    const CharValue v = chi.at(a);
    if (v.is_zero()) continue;
    const BigComplex term = gaussian(v) * zeta;
    sum.re += term.re;
    sum.im += term.im;
  }
  return sum;
}

BigComplex l_value_at_one(const DirichletCharacter& chi) {
  require_nontrivial(chi, "L(1, chi)");
  if (!chi.is_odd()) throw Error(ErrorKind::InvalidArgument, "L(1, chi): closed form needs an odd character");
  const GaussianRational b = bernoulli_b1(chi.conjugate());
  const BigComplex b1{to_bigfloat(b.re), to_bigfloat(b.im)};
  const BigComplex i_pi_over_f{0, pi() / BigFloat(chi.conductor())};
  return i_pi_over_f * gauss_sum(chi) * b1;
}

std::complex<double> euler_product(const DirichletCharacter& chi, std::uint32_t bound) {
  std::complex<double> acc = 1;
  for (const std::uint32_t ell : primes_below(bound)) {
    const CharValue v = chi.at(static_cast<std::uint64_t>(ell));
    if (v.is_zero()) continue;
    const auto g = v.gaussian();
    acc /= 1.0 - std::complex<double>(g[0], g[1]) / static_cast<double>(ell);
  }
  return acc;
}

std::uint64_t imag_quadratic_h(const BigInt& d) {
  if (d >= 0 || !is_fundamental_discriminant(d))
    throw Error(ErrorKind::InvalidArgument, "class number: " + d.get_str() + " is not a negative fundamental discriminant");
  if (!d.fits_slong_p()) throw Error(ErrorKind::Budget, "class number: discriminant too large");
  const std::int64_t dd = d.get_si();
  std::uint64_t h = 0;
  // Reduced forms have a <= sqrt(|D|/3).
  for (std::int64_t a = 1; 3 * a * a <= -dd; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (((b - dd) & 1) != 0) continue;
      const std::int64_t num = b * b - dd;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      ++h;
    }
  }
  return h;
}

int quadratic_roots_of_unity(const BigInt& d) {
  if (d == -3) return 6;
  if (d == -4) return 4;
  return 2;
}

BigFloat quadratic_l_value_from_forms(const BigInt& d) {
  const BigFloat h(imag_quadratic_h(d));
  return 2 * pi() * h / (quadratic_roots_of_unity(d) * sqrt(to_bigfloat(BigInt(abs(d)))));
}

ClassNumberData relative_class_number(const WeilPolynomial& w, const CharacterGroup& cg) {
  ClassNumberData out;
  out.omega_k = omega_K(cg);
  out.unit_index = hasse_unit_index(cg);
  BigComplex prod{1, 0};
  for (const auto& chi : cg.s_k()) {
    out.l_values.push_back(l_value_at_one(chi));
    prod = prod * out.l_values.back();
  }
  const BigFloat nu_inf = nu_infinity(w);
  // prod is real: a conjugate pair in the cyclic case, two real values otherwise.
  const BigFloat scale = BigFloat(out.unit_index * out.omega_k) * nu_inf;
  out.h_rel_approx = scale * prod.re;
  const BigFloat nearest = round(out.h_rel_approx);
  out.integrality_gap = static_cast<double>(abs(out.h_rel_approx - nearest));
  const double imag = static_cast<double>(abs(prod.im));
  if (out.integrality_gap > kIntegralityTolerance || imag > kIntegralityTolerance || nearest < 1)
    throw Error(ErrorKind::Integrality, "h(K)/h(K+) = " + out.h_rel_approx.str(20) + " is not a positive integer");
  out.h_rel = to_bigint(nearest);
  out.rhs_mass = make_rational(out.h_rel, BigInt(out.omega_k));
  out.euler_limit = make_rational(out.h_rel, BigInt(out.unit_index * out.omega_k));

  if (cg.imaginary_discriminants) {
    BigFloat forms = scale;
    for (const auto& d : *cg.imaginary_discriminants) forms *= quadratic_l_value_from_forms(d);
    const BigFloat r = round(forms);
    if (abs(forms - r) > kIntegralityTolerance)
      throw Error(ErrorKind::Integrality, "form-count route gives non-integral " + forms.str(20));
    out.h_rel_from_forms = to_bigint(r);
    if (*out.h_rel_from_forms != out.h_rel)
      throw Error(ErrorKind::OracleMismatch, "h_rel: L-value route " + out.h_rel.get_str() + " vs form-count route " +
                                                 out.h_rel_from_forms->get_str());
  }
  return out;
}

MassReport verify_mass(const WeilPolynomial& w, const std::vector<std::uint64_t>& cutoffs,
                       const IdentifyOptions& opts) {
  MassReport rep;
  rep.poly = w;
  rep.validation = validate(w);
  rep.validation_ok = rep.validation.passed();
  if (!rep.validation_ok) {
    rep.failure = ErrorKind::Validation;
    for (const auto& f : rep.validation.failures) rep.notes.push_back("validation: " + f);
    return rep;
  }
  try {
    rep.characters = identify_characters(w, opts);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    rep.failure = e.kind();
    rep.notes.push_back(std::string("identification: ") + e.what());
    return rep;
  }
  const CharacterGroup& cg = *rep.characters;

  try {
    rep.class_numbers = relative_class_number(w, cg);
    rep.integrality_ok = true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    rep.failure = e.kind();
    rep.notes.push_back(std::string("class number: ") + e.what());
  }

  const BigFloat inf_f = nu_infinity(w);
  const BigFloat inf_k = nu_infinity_field(cg);
  const bool archimedean_ok = abs(inf_f - inf_k) <= BigFloat("1e-40") * inf_k;
  if (!archimedean_ok) rep.notes.push_back("matching: the two archimedean factors differ");

  const auto products = partial_products(w, cg, cutoffs);
  const std::size_t disagreements = products.empty() ? 0 : products.back().disagreements;
  rep.ell2_disagreement = !products.empty() && products.back().ell2_disagreement;
  if (disagreements > 0)
    rep.notes.push_back("matching: " + std::to_string(disagreements) + " odd places with shape != character value");
  if (rep.ell2_disagreement) rep.notes.push_back("ell = 2: shape cross-check differs from the character value");
  rep.matching_ok = archimedean_ok && disagreements == 0;
  if (!rep.matching_ok && !rep.failure) rep.failure = ErrorKind::OracleMismatch;

  if (rep.class_numbers) {
    const BigFloat target = to_bigfloat(rep.class_numbers->rhs_mass);
    for (const auto& p : products)
      rep.convergence.push_back({p.cutoff, p.value, static_cast<double>(abs(log(p.value / target)))});
    rep.convergence_ok = std::adjacent_find(rep.convergence.begin(), rep.convergence.end(),
                                            [](const ConvergenceRow& x, const ConvergenceRow& y) {
                                              return y.log_error >= x.log_error;
                                            }) == rep.convergence.end();
    if (!rep.convergence_ok) rep.notes.push_back("convergence: |log(P(X)/mass)| is not strictly decreasing");
    if (rep.class_numbers->unit_index == 2)
      rep.notes.push_back("unit index 2: the partial products tend to h_rel / (2 omega_K), half the mass");
  }
  if (cg.galois_type == GaloisType::Biquadratic)
    rep.notes.push_back("biquadratic: reading the mass as a weighted count of principally polarized varieties is conjectural");
  return rep;
}

}  // namespace weilmass
