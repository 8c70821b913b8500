#include "weilmass/characters.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "weilmass/fppoly.hpp"

namespace weilmass {

using gsp4::ShapeKind;

std::array<int, 2> CharValue::gaussian() const noexcept {
  switch (exponent) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    case 3: return {0, -1};
    default: return {0, 0};
  }
}

std::string CharValue::to_string() const {
  switch (exponent) {
    case 0: return "1";
    case 1: return "i";
    case 2: return "-1";
    case 3: return "-i";
    default: return "0";
  }
}

DirichletCharacter::DirichletCharacter(std::uint64_t conductor, std::vector<std::int8_t> exponents)
    : conductor_(conductor), exp_(std::move(exponents)) {
  if (conductor_ == 0 || exp_.size() != conductor_) {
    throw Error(ErrorKind::InvalidArgument, "character table size must equal its conductor");
  }
  order_ = 1;
  for (auto e : exp_) {
    if (e == CharValue::kZero) continue;
    if (e % 2 == 1) {
      order_ = 4;
      break;
    }
    if (e == 2) order_ = 2;
  }
}

DirichletCharacter DirichletCharacter::trivial() { return DirichletCharacter(1, {0}); }

DirichletCharacter DirichletCharacter::kronecker(const BigInt& d) {
  if (d == 1) return trivial();
  if (!is_fundamental_discriminant(d)) {
    throw Error(ErrorKind::InvalidArgument, d.get_str() + " is not a fundamental discriminant");
  }
  const auto f = static_cast<std::uint64_t>(BigInt(abs(d)).get_ui());
  std::vector<std::int8_t> exp(f);
  const std::int64_t ds = d.get_si();
  for (std::uint64_t n = 0; n < f; ++n) {
    const int k = n == 0 ? 0 : kronecker_symbol(ds, n);
    exp[n] = k == 0 ? CharValue::kZero : (k == 1 ? 0 : 2);
  }
  return DirichletCharacter(f, std::move(exp));
}

bool DirichletCharacter::is_odd() const { return at_signed(-1).exponent == 2; }

CharValue DirichletCharacter::at(std::uint64_t n) const { return CharValue{exp_[n % conductor_]}; }

CharValue DirichletCharacter::at(const BigInt& n) const { return CharValue{exp_[mod_floor(n, conductor_)]}; }

CharValue DirichletCharacter::at_signed(std::int64_t n) const {
  return CharValue{exp_[static_cast<std::size_t>(mod_floor(n, static_cast<std::int64_t>(conductor_)))]};
}

DirichletCharacter DirichletCharacter::conjugate() const {
  std::vector<std::int8_t> e(exp_);
  for (auto& x : e) {
    if (x != CharValue::kZero) x = static_cast<std::int8_t>((4 - x) % 4);
  }
  return DirichletCharacter(conductor_, std::move(e));
}

DirichletCharacter DirichletCharacter::square() const {
  std::vector<std::int8_t> e(exp_);
  for (auto& x : e) {
    if (x != CharValue::kZero) x = static_cast<std::int8_t>((2 * x) % 4);
  }
  return DirichletCharacter(conductor_, std::move(e));
}

CharValue chi_at_ell(const DirichletCharacter& chi, std::uint64_t ell) { return chi.at(ell); }

BigInt CharacterGroup::conductor_product() const {
  BigInt prod = 1;
  for (const auto& c : characters) prod *= static_cast<unsigned long>(c.conductor());
  return prod;
}

// ---------------------------------------------------------------------------
// Splitting data

namespace {

struct TableRow {
  unsigned e, f, r;
  ShapeKind shape;
};

constexpr TableRow kCyclicRows[] = {
    {1, 1, 4, ShapeKind::Split}, {1, 2, 2, ShapeKind::DQ_S}, {2, 1, 2, ShapeKind::DRL_S},
    {1, 4, 1, ShapeKind::Quartic}, {2, 2, 1, ShapeKind::RQ_2}, {4, 1, 1, ShapeKind::QRL},
};

constexpr TableRow kBiquadraticRows[] = {
    {1, 1, 4, ShapeKind::Split}, {1, 2, 2, ShapeKind::DQ_I}, {2, 1, 2, ShapeKind::DRL_I}, {1, 2, 2, ShapeKind::DQ_S},
    {2, 1, 2, ShapeKind::DRL_S}, {2, 2, 1, ShapeKind::RQ_1}, {2, 2, 1, ShapeKind::RQ_2},
};

}  // namespace

SplittingData splitting_invariants(const WeilPolynomial& w, std::uint32_t ell, std::optional<GaloisType> type) {
  if (static_cast<std::int64_t>(ell) == w.p) throw Error(ErrorKind::InvalidArgument, "splitting data needs ell != p");
  const auto c = w.coefficients();
  const auto factors = factor_mod_ell(std::span<const BigInt>(c.data(), c.size()), ell);
  SplittingData sd;
  sd.ell = ell;
  sd.e = factors.front().multiplicity;
  sd.f = static_cast<unsigned>(factors.front().poly.degree());
  sd.r = static_cast<unsigned>(factors.size());
  for (const auto& fac : factors) {
    if (fac.multiplicity != sd.e || static_cast<unsigned>(fac.poly.degree()) != sd.f) {
      throw Error(ErrorKind::Validation, "pattern mismatch: non-uniform factorization of f mod " + std::to_string(ell));
    }
  }
  const auto m = static_cast<std::uint32_t>(mod_floor(w.q, ell));
  sd.shape = gsp4::ClassShape{gsp4::classify_factorization(factors, m, ell), gsp4::ShapeSign::NotApplicable};
  if (type && ell != 2 && *type != GaloisType::NotAbelianGalois) {
    const auto rows = *type == GaloisType::Cyclic4 ? std::span<const TableRow>(kCyclicRows)
                                                   : std::span<const TableRow>(kBiquadraticRows);
    const bool ok = std::any_of(rows.begin(), rows.end(), [&](const TableRow& row) {
      return row.e == sd.e && row.f == sd.f && row.r == sd.r && row.shape == sd.shape.kind;
    });
    if (!ok) {
      throw Error(ErrorKind::Validation, "splitting (" + std::to_string(sd.e) + "," + std::to_string(sd.f) + "," +
                                             std::to_string(sd.r) + ") with shape " + gsp4::to_string(sd.shape.kind) +
                                             " at ell = " + std::to_string(ell) + " is not a " + to_string(*type) +
                                             " row");
    }
  }
  return sd;
}

// ---------------------------------------------------------------------------
// Identification

namespace {

// Character of prime-power modulus given as an exponent table (kZero off the units).
struct Local {
  std::uint64_t modulus;
  std::vector<std::int8_t> exp;
  std::int8_t at(std::uint64_t n) const { return exp[n % modulus]; }
};

std::uint64_t primitive_root(std::uint64_t p) {
  std::vector<std::uint64_t> qs;
  std::uint64_t n = p - 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      qs.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) qs.push_back(n);
  for (std::uint64_t g = 2; g < p; ++g) {
    if (std::all_of(qs.begin(), qs.end(), [&](std::uint64_t q) { return mod_pow(g, (p - 1) / q, p) != 1; })) return g;
  }
  return 1;
}

// chi(g) = i^s on the cyclic group (Z/p)^x.
Local odd_local(std::uint64_t p, int s) {
  Local loc{p, std::vector<std::int8_t>(p, CharValue::kZero)};
  const std::uint64_t g = primitive_root(p);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k + 1 < p; ++k) {
    loc.exp[x] = static_cast<std::int8_t>((k * s) % 4);
    x = x * g % p;
  }
  return loc;
}

// chi(-1) = i^s_minus, chi(5) = i^s_five on (Z/t)^x = <-1> x <5>, t in {4, 8, 16}.
Local two_local(std::uint64_t t, int s_minus, int s_five) {
  Local loc{t, std::vector<std::int8_t>(t, CharValue::kZero)};
  const std::uint64_t five_order = t / 4;
  for (int i = 0; i < 2; ++i) {
    std::uint64_t x = i == 0 ? 1 : t - 1;
    for (std::uint64_t j = 0; j < five_order; ++j) {
      loc.exp[x] = static_cast<std::int8_t>((i * s_minus + static_cast<int>(j) * s_five) % 4);
      x = x * 5 % t;
    }
  }
  return loc;
}

struct Candidate {
  std::uint64_t modulus = 1;
  std::vector<Local> parts;

  std::int8_t at(std::uint64_t n) const {
    int e = 0;
    for (const auto& p : parts) {
      const std::int8_t v = p.at(n);
      if (v == CharValue::kZero) return CharValue::kZero;
      e += v;
    }
    return static_cast<std::int8_t>(e % 4);
  }

  DirichletCharacter materialize() const {
    std::vector<std::int8_t> exp(modulus);
    for (std::uint64_t n = 0; n < modulus; ++n) exp[n] = at(n);
    return DirichletCharacter(modulus, std::move(exp));
  }
};

class TestPrimes {
 public:
  TestPrimes(const WeilPolynomial& w, const BigInt& delta_order) : w_(w), inv_(invariants(w)), delta_(delta_order) {}

  // Shapes at every test prime below `bound`, extending the cache as needed.
  const std::vector<std::pair<std::uint32_t, ShapeKind>>& upto(std::uint64_t bound) {
    if (bound > covered_) {
      for (const auto ell : primes_below(static_cast<std::uint32_t>(bound))) {
        if (ell <= covered_ || ell == 2 || static_cast<std::int64_t>(ell) == w_.p) continue;
        if (mpz_divisible_ui_p(delta_.get_mpz_t(), ell) != 0) continue;
        ShapeKind kind;
        try {
          kind = gsp4::unramified_frobenius_kind(w_, inv_, ell);
        } catch (const Error& err) {
          throw Error(ErrorKind::Identification, err.what());
        }
        shapes_.emplace_back(ell, kind);
      }
      covered_ = bound;
    }
    return shapes_;
  }

 private:
  const WeilPolynomial& w_;
  WeilInvariants inv_;
  BigInt delta_;
  std::uint64_t covered_ = 0;
  std::vector<std::pair<std::uint32_t, ShapeKind>> shapes_;
};

constexpr std::uint64_t kScreenBound = 1000;

// psi viewed as a character mod m (its conductor divides m).
DirichletCharacter lift(const DirichletCharacter& psi, std::uint64_t m) {
  std::vector<std::int8_t> e(m);
  for (std::uint64_t n = 0; n < m; ++n) e[n] = std::gcd(n, m) == 1 ? psi.at(n).exponent : CharValue::kZero;
  return DirichletCharacter(m, std::move(e));
}

bool cyclic_value_matches(std::int8_t e, ShapeKind shape) {
  switch (shape) {
    case ShapeKind::Split: return e == 0;
    case ShapeKind::DQ_S: return e == 2;
    case ShapeKind::Quartic: return e == 1 || e == 3;
    default: return false;
  }
}

bool biquadratic_values_match(int k1, int k2, ShapeKind shape) {
  switch (shape) {
    case ShapeKind::Split: return k1 == 1 && k2 == 1;
    case ShapeKind::DQ_I: return k1 * k2 == -1;
    case ShapeKind::DQ_S: return k1 == -1 && k2 == -1;
    default: return false;
  }
}

template <typename T, typename Pred>
void filter_on(std::vector<T>& cands, const std::vector<std::pair<std::uint32_t, ShapeKind>>& shapes,
               std::uint64_t lo, std::uint64_t hi, Pred matches) {
  std::erase_if(cands, [&](const T& c) {
    for (const auto& [ell, shape] : shapes) {
      if (ell < lo || ell >= hi) continue;
      if (!matches(c, ell, shape)) return true;
    }
    return false;
  });
}

std::vector<BigInt> odd_primes_of(const BigInt& n) {
  std::vector<BigInt> out;
  for (const auto& pp : factor_integer(abs(n))) {
    if (pp.prime != 2) out.push_back(pp.prime);
  }
  return out;
}

CharacterGroup identify_cyclic(const WeilPolynomial& w, const BigInt& dplus, const BigInt& delta_order,
                               const IdentifyOptions& opts) {
  const std::vector<BigInt> odd = odd_primes_of(delta_order);
  const bool two_divides = mpz_even_p(delta_order.get_mpz_t()) != 0;
  const DirichletCharacter psi = DirichletCharacter::kronecker(dplus);

  // Odd part of a conductor is squarefree; at p | d+ the local character has order 4, else 2.
  std::vector<Candidate> cands;
  const std::size_t subsets = std::size_t{1} << odd.size();
  std::vector<std::pair<std::uint64_t, std::vector<std::pair<int, int>>>> two_parts = {{1, {}}};
  if (two_divides) {
    two_parts.push_back({4, {{2, 0}}});
    two_parts.push_back({8, {{0, 2}, {2, 2}}});
    two_parts.push_back({16, {{0, 1}, {0, 3}, {2, 1}, {2, 3}}});
  }
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    BigInt odd_m = 1;
    std::vector<std::pair<std::uint64_t, std::vector<int>>> odd_choices;
    bool feasible = true;
    for (std::size_t i = 0; i < odd.size(); ++i) {
      const bool in_m = ((mask >> i) & 1U) != 0;
      const bool in_dplus = mpz_divisible_p(dplus.get_mpz_t(), odd[i].get_mpz_t()) != 0;
      if (in_dplus && !in_m) feasible = false;
      if (!in_m) continue;
      odd_m *= odd[i];
      const std::uint64_t p = odd[i].get_ui();
      if (in_dplus) {
        if (p % 4 != 1) feasible = false;
        odd_choices.push_back({p, {1, 3}});
      } else {
        odd_choices.push_back({p, {2}});
      }
    }
    if (!feasible) continue;
    for (const auto& [t, options] : two_parts) {
      const BigInt m = odd_m * static_cast<unsigned long>(t);
      if (mpz_divisible_p(m.get_mpz_t(), BigInt(abs(dplus)).get_mpz_t()) == 0) continue;
      if (mpz_divisible_p(delta_order.get_mpz_t(), BigInt(m * m * abs(dplus)).get_mpz_t()) == 0) continue;
      if (m.fits_ulong_p() == 0 || m > BigInt(1UL << 31)) continue;
      // Cartesian product over local choices.
      std::vector<Candidate> partial{Candidate{}};
      for (const auto& [p, ss] : odd_choices) {
        std::vector<Candidate> next;
        for (const auto& c : partial) {
          for (int s : ss) {
            Candidate d = c;
            d.parts.push_back(odd_local(p, s));
            next.push_back(std::move(d));
          }
        }
        partial = std::move(next);
      }
      std::vector<Candidate> with_two;
      for (const auto& c : partial) {
        if (t == 1) {
          with_two.push_back(c);
          continue;
        }
        for (const auto& [sm, s5] : options) {
          Candidate d = c;
          d.parts.push_back(two_local(t, sm, s5));
          with_two.push_back(std::move(d));
        }
      }
      for (auto& c : with_two) {
        c.modulus = m.get_ui();
        cands.push_back(std::move(c));
      }
    }
  }
  // Odd, order 4, square equal to psi away from the conductor.
  std::erase_if(cands, [&](const Candidate& c) {
    if (c.at(c.modulus - 1) != 2) return true;
    bool order4 = false;
    for (const auto& p : c.parts) {
      for (auto e : p.exp) order4 = order4 || (e == 1 || e == 3);
    }
    return !order4;
  });

  TestPrimes tp(w, w.coefficients()[0] * delta_order);
  auto matches = [](const Candidate& c, std::uint32_t ell, ShapeKind shape) { return cyclic_value_matches(c.at(ell), shape); };

  std::uint64_t bound = opts.prime_bound != 0 ? opts.prime_bound : kScreenBound;
  filter_on(cands, tp.upto(bound), 0, bound, matches);
  if (opts.prime_bound == 0) {
    std::uint64_t largest = 1;
    for (const auto& c : cands) largest = std::max(largest, c.modulus);
    const std::uint64_t target = std::max<std::uint64_t>(kScreenBound, 30 * largest);
    filter_on(cands, tp.upto(target), bound, target, matches);
    bound = target;
  }
  // Survivors come in conjugate pairs.
  auto distinct_pairs = [](const std::vector<Candidate>& cs) { return cs.size() / 2; };
  for (int esc = 0; distinct_pairs(cands) > 1 && esc < opts.max_escalations; ++esc) {
    filter_on(cands, tp.upto(2 * bound), bound, 2 * bound, matches);
    bound *= 2;
  }
  if (cands.empty()) {
    throw Error(ErrorKind::Identification, "no quartic character matches the splitting of " + w.to_string());
  }
  if (distinct_pairs(cands) > 1) {
    throw Error(ErrorKind::Identification, std::to_string(distinct_pairs(cands)) +
                                               " conjugate pairs of characters survive up to " + std::to_string(bound));
  }
  DirichletCharacter chi = cands.front().materialize();
  if (chi.square() != lift(psi, chi.conductor())) {
    throw Error(ErrorKind::Identification, "identified character does not square to the character of K+");
  }
  DirichletCharacter chibar = chi.conjugate();
  // Canonical order within the pair: lexicographically smaller exponent table first.
  if (chibar.exponents() < chi.exponents()) std::swap(chi, chibar);
  CharacterGroup cg;
  cg.galois_type = GaloisType::Cyclic4;
  cg.characters = {DirichletCharacter::trivial(), psi, chi, chibar};
  cg.delta_kplus = dplus;
  cg.delta_k = dplus * static_cast<unsigned long>(chi.conductor()) * static_cast<unsigned long>(chi.conductor());
  cg.prime_bound = bound;
  return cg;
}

CharacterGroup identify_biquadratic(const WeilPolynomial& w, const BigInt& dplus, const BigInt& delta_order,
                                    const IdentifyOptions& opts) {
  const std::vector<BigInt> odd = odd_primes_of(delta_order);
  const bool two_divides = mpz_even_p(delta_order.get_mpz_t()) != 0;
  std::vector<long> two_parts{1};
  if (two_divides) two_parts.insert(two_parts.end(), {-4, 8, -8});

  struct Pair {
    BigInt d1, d2;
    std::int64_t s1, s2;
  };
  std::vector<Pair> cands;
  std::set<std::pair<BigInt, BigInt>> seen;
  const std::size_t subsets = std::size_t{1} << odd.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    BigInt core = 1;
    for (std::size_t i = 0; i < odd.size(); ++i) {
      if (((mask >> i) & 1U) == 0) continue;
      const BigInt& p = odd[i];
      core *= (p % 4 == 1) ? p : BigInt(-p);
    }
    for (long t : two_parts) {
      const BigInt d1 = core * t;
      if (d1 >= 0) continue;
      if (mpz_divisible_p(delta_order.get_mpz_t(), BigInt(abs(d1)).get_mpz_t()) == 0) continue;
      const BigInt d2 = fundamental_discriminant(dplus * d1);
      if (d2 >= 0 || d2 == d1) continue;
      if (mpz_divisible_p(delta_order.get_mpz_t(), BigInt(abs(d2)).get_mpz_t()) == 0) continue;
      const auto key = d1 < d2 ? std::make_pair(d1, d2) : std::make_pair(d2, d1);
      if (!seen.insert(key).second) continue;
      if (!key.first.fits_slong_p() || !key.second.fits_slong_p()) continue;
      cands.push_back({key.first, key.second, key.first.get_si(), key.second.get_si()});
    }
  }

  TestPrimes tp(w, w.coefficients()[0] * delta_order);
  auto matches = [](const Pair& c, std::uint32_t ell, ShapeKind shape) {
    return biquadratic_values_match(kronecker_symbol(c.s1, ell), kronecker_symbol(c.s2, ell), shape);
  };
  std::uint64_t bound = opts.prime_bound != 0 ? opts.prime_bound : kScreenBound;
  filter_on(cands, tp.upto(bound), 0, bound, matches);
  if (opts.prime_bound == 0) {
    std::uint64_t largest = 1;
    for (const auto& c : cands) largest = std::max<std::uint64_t>(largest, static_cast<std::uint64_t>(-c.s1));
    const std::uint64_t target = std::max<std::uint64_t>(kScreenBound, 30 * largest);
    filter_on(cands, tp.upto(target), bound, target, matches);
    bound = target;
  }
  for (int esc = 0; cands.size() > 1 && esc < opts.max_escalations; ++esc) {
    filter_on(cands, tp.upto(2 * bound), bound, 2 * bound, matches);
    bound *= 2;
  }
  if (cands.empty()) {
    throw Error(ErrorKind::Identification, "no pair of imaginary quadratic fields matches the splitting of " + w.to_string());
  }
  if (cands.size() > 1) {
    throw Error(ErrorKind::Identification,
                std::to_string(cands.size()) + " imaginary quadratic pairs survive up to " + std::to_string(bound));
  }
  const Pair& pr = cands.front();
  CharacterGroup cg;
  cg.galois_type = GaloisType::Biquadratic;
  cg.characters = {DirichletCharacter::trivial(), DirichletCharacter::kronecker(dplus),
                   DirichletCharacter::kronecker(pr.d1), DirichletCharacter::kronecker(pr.d2)};
  cg.delta_kplus = dplus;
  cg.delta_k = dplus * pr.d1 * pr.d2;
  cg.imaginary_discriminants = std::array<BigInt, 2>{pr.d1, pr.d2};
  cg.prime_bound = bound;
  return cg;
}

}  // namespace

CharacterGroup identify_characters(const WeilPolynomial& w, const IdentifyOptions& opts) {
  const WeilInvariants inv = invariants(w);
  if (inv.delta_order <= 0) throw Error(ErrorKind::Identification, "disc O_f must be positive");
  const GaloisType type = galois_type(w);
  if (type == GaloisType::NotAbelianGalois) {
    throw Error(ErrorKind::Identification, "K_f is not abelian Galois");
  }
  const BigInt dplus = fundamental_discriminant(inv.delta_fplus);
  if (dplus <= 0) throw Error(ErrorKind::Identification, "K+ is not real quadratic");
  return type == GaloisType::Cyclic4 ? identify_cyclic(w, dplus, inv.delta_order, opts)
                                     : identify_biquadratic(w, dplus, inv.delta_order, opts);
}

BigRational nu_ell_K(const CharacterGroup& cg, std::uint64_t ell) {
  // prod (ell - chi(ell)) as a Gaussian integer.
  BigInt re = 1;
  BigInt im = 0;
  for (const auto& chi : cg.s_k()) {
    const auto [cr, ci] = chi.at(ell).gaussian();
    const BigInt fr = BigInt(static_cast<unsigned long>(ell)) - cr;
    const BigInt fi = -ci;
    const BigInt nr = re * fr - im * fi;
    const BigInt ni = re * fi + im * fr;
    re = nr;
    im = ni;
  }
  if (im != 0) throw Error(ErrorKind::Identification, "S(K) values are not closed under conjugation");
  const BigInt l(static_cast<unsigned long>(ell));
  return make_rational(l * l, re);
}

std::string character_group_json(const CharacterGroup& cg, bool with_tables) {
  nlohmann::ordered_json j;
  j["galois_type"] = to_string(cg.galois_type);
  j["delta_k"] = cg.delta_k.get_str();
  j["delta_kplus"] = cg.delta_kplus.get_str();
  if (cg.imaginary_discriminants) {
    j["imaginary_discriminants"] = {(*cg.imaginary_discriminants)[0].get_str(),
                                    (*cg.imaginary_discriminants)[1].get_str()};
  }
  j["prime_bound"] = cg.prime_bound;
  nlohmann::ordered_json chars = nlohmann::ordered_json::array();
  static constexpr const char* kRoles[] = {"trivial", "real_quadratic", "odd", "odd"};
  for (std::size_t i = 0; i < cg.characters.size(); ++i) {
    const auto& c = cg.characters[i];
    nlohmann::ordered_json cj;
    cj["role"] = kRoles[i];
    cj["conductor"] = c.conductor();
    cj["order"] = c.order();
    cj["parity"] = c.conductor() == 1 ? "even" : (c.is_odd() ? "odd" : "even");
    if (with_tables) cj["exponents"] = c.exponents();
    chars.push_back(cj);
  }
  j["characters"] = chars;
  return j.dump();
}

}  // namespace weilmass
