#include "weilmass/fppoly.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace weilmass {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t ell) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(ell), new_r = static_cast<std::int64_t>(a % ell);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw Error(ErrorKind::InvalidArgument, "element not invertible mod " + std::to_string(ell));
  return static_cast<std::uint64_t>(mod_floor(t, static_cast<std::int64_t>(ell)));
}

FpPoly::FpPoly(std::uint64_t ell, std::vector<std::uint64_t> coeffs) : ell_(ell), c_(std::move(coeffs)) {
  for (auto& c : c_) c %= ell_;
  trim();
}

FpPoly FpPoly::constant(std::uint64_t ell, std::uint64_t c) { return FpPoly(ell, {c}); }

FpPoly FpPoly::x(std::uint64_t ell) { return FpPoly(ell, {0, 1}); }

FpPoly FpPoly::from_signed(std::uint64_t ell, std::span<const std::int64_t> coeffs) {
  std::vector<std::uint64_t> c;
  c.reserve(coeffs.size());
  for (auto v : coeffs) c.push_back(static_cast<std::uint64_t>(mod_floor(v, static_cast<std::int64_t>(ell))));
  return FpPoly(ell, std::move(c));
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::uint64_t FpPoly::eval(std::uint64_t x) const {
  std::uint64_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (mulmod(acc, x, ell_) + *it) % ell_;
  return acc;
}

FpPoly FpPoly::monic() const {
  if (c_.empty()) return *this;
  const std::uint64_t inv = inv_mod(c_.back(), ell_);
  std::vector<std::uint64_t> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = mulmod(c_[i], inv, ell_);
  return FpPoly(ell_, std::move(out));
}

FpPoly FpPoly::derivative() const {
  if (c_.size() <= 1) return FpPoly(ell_, {});
  std::vector<std::uint64_t> out(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = mulmod(c_[i], i % ell_, ell_);
  return FpPoly(ell_, std::move(out));
}

FpPoly FpPoly::operator+(const FpPoly& o) const {
  std::vector<std::uint64_t> out(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i))) % ell_;
  return FpPoly(ell_, std::move(out));
}

FpPoly FpPoly::operator-(const FpPoly& o) const {
  std::vector<std::uint64_t> out(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (coeff(static_cast<int>(i)) + ell_ - o.coeff(static_cast<int>(i))) % ell_;
  }
  return FpPoly(ell_, std::move(out));
}

FpPoly FpPoly::operator*(const FpPoly& o) const {
  if (c_.empty() || o.c_.empty()) return FpPoly(ell_, {});
  std::vector<std::uint64_t> out(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = 0; j < o.c_.size(); ++j) out[i + j] = (out[i + j] + mulmod(c_[i], o.c_[j], ell_)) % ell_;
  }
  return FpPoly(ell_, std::move(out));
}

void divmod(const FpPoly& a, const FpPoly& b, FpPoly& quot, FpPoly& rem) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  const std::uint64_t ell = a.modulus();
  std::vector<std::uint64_t> r = a.coeffs();
  const auto& d = b.coeffs();
  const std::uint64_t inv = inv_mod(d.back(), ell);
  if (r.size() < d.size()) {
    quot = FpPoly(ell, {});
    rem = a;
    return;
  }
  std::vector<std::uint64_t> q(r.size() - d.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    const std::uint64_t coef = mulmod(r[k + d.size() - 1], inv, ell);
    q[k] = coef;
    if (coef == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) {
      r[k + j] = (r[k + j] + ell - mulmod(coef, d[j], ell)) % ell;
    }
  }
  r.resize(d.size() - 1);
  quot = FpPoly(ell, std::move(q));
  rem = FpPoly(ell, std::move(r));
}

FpPoly FpPoly::operator/(const FpPoly& o) const {
  FpPoly q, r;
  divmod(*this, o, q, r);
  return q;
}

FpPoly FpPoly::operator%(const FpPoly& o) const {
  FpPoly q, r;
  divmod(*this, o, q, r);
  return r;
}

bool canonical_less(const FpPoly& a, const FpPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  }
  return false;
}

std::string FpPoly::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const std::uint64_t c = c_[i];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c;
      continue;
    }
    if (c != 1) os << c << '*';
    os << var;
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

FpPoly gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FpPoly powmod(const FpPoly& base, std::uint64_t exp, const FpPoly& mod) {
  FpPoly result = FpPoly::constant(mod.modulus(), 1) % mod;
  FpPoly b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = (result * b) % mod;
    b = (b * b) % mod;
    exp >>= 1;
  }
  return result;
}

namespace {

// p-th root of a polynomial whose derivative vanishes: keep the coefficients at multiples of p.
FpPoly pth_root(const FpPoly& f) {
  const std::uint64_t p = f.modulus();
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < f.coeffs().size(); i += p) out.push_back(f.coeffs()[i]);
  return FpPoly(p, std::move(out));
}

// Squarefree factorization over a finite field of characteristic p.
void squarefree(const FpPoly& f, unsigned scale, std::vector<FpFactor>& out) {
  const std::uint64_t p = f.modulus();
  if (f.degree() <= 0) return;
  FpPoly fp = f.derivative();
  if (fp.is_zero()) {
    squarefree(pth_root(f), scale * static_cast<unsigned>(p), out);
    return;
  }
  FpPoly c = gcd(f, fp);
  FpPoly w = f / c;
  unsigned i = 1;
  while (!w.is_one()) {
    FpPoly y = gcd(w, c);
    FpPoly fac = w / y;
    if (fac.degree() > 0) out.push_back({fac.monic(), i * scale});
    ++i;
    w = y;
    c = c / y;
  }
  if (!c.is_one() && c.degree() > 0) squarefree(pth_root(c), scale * static_cast<unsigned>(p), out);
}

// Distinct-degree factorization of a monic squarefree polynomial.
std::vector<std::pair<FpPoly, int>> distinct_degree(FpPoly f) {
  const std::uint64_t ell = f.modulus();
  std::vector<std::pair<FpPoly, int>> out;
  const FpPoly x = FpPoly::x(ell);
  FpPoly h = x % f;
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = powmod(h, ell, f);
    FpPoly g = gcd(f, h - x);
    if (!g.is_one()) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f.monic(), f.degree());
  return out;
}

FpPoly random_poly(std::uint64_t ell, int max_degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, ell - 1);
  std::vector<std::uint64_t> c(static_cast<std::size_t>(max_degree) + 1);
  for (auto& v : c) v = dist(rng);
  return FpPoly(ell, std::move(c));
}

// Equal-degree splitting (Cantor-Zassenhaus); for ell = 2 the absolute trace map is used.
void equal_degree(const FpPoly& f, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (f.degree() == d) {
    out.push_back(f.monic());
    return;
  }
  const std::uint64_t ell = f.modulus();
  for (;;) {
    FpPoly r = random_poly(ell, f.degree() - 1, rng);
    if (r.degree() < 1) continue;
    FpPoly t;
    if (ell == 2) {
      t = r % f;
      FpPoly acc = t;
      for (int i = 1; i < d; ++i) {
        t = (t * t) % f;
        acc = acc + t;
      }
      t = acc;
    } else {
      unsigned __int128 e = 1;
      for (int i = 0; i < d; ++i) {
        e *= ell;
        if (e >> 64) throw Error(ErrorKind::Budget, "equal-degree split: ell^d overflows 64 bits");
      }
      t = powmod(r, static_cast<std::uint64_t>((e - 1) / 2), f) - FpPoly::constant(ell, 1);
    }
    FpPoly g = gcd(f, t);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<FpFactor> factor_mod_ell(const FpPoly& f) {
  const std::uint64_t ell = f.modulus();
  if (!is_prime(ell)) throw Error(ErrorKind::InvalidArgument, "modulus " + std::to_string(ell) + " is not prime");
  if (ell > kMaxFactorModulus) throw Error(ErrorKind::InvalidArgument, "modulus too large for factor_mod_ell");
  if (f.is_zero() || f.leading() != 1) throw Error(ErrorKind::InvalidArgument, "factor_mod_ell needs a monic polynomial");

  std::vector<FpFactor> parts;
  squarefree(f, 1, parts);

  std::mt19937_64 rng(0x5eedf00dULL);
  std::vector<FpFactor> out;
  for (const auto& part : parts) {
    for (const auto& [block, d] : distinct_degree(part.poly)) {
      std::vector<FpPoly> irreducibles;
      equal_degree(block, d, rng, irreducibles);
      for (auto& g : irreducibles) out.push_back({std::move(g), part.multiplicity});
    }
  }
  // The same irreducible can arise from different squarefree layers only through p-th power
  // recursion; merge to keep factors distinct.
  std::sort(out.begin(), out.end(), [](const FpFactor& a, const FpFactor& b) { return canonical_less(a.poly, b.poly); });
  std::vector<FpFactor> merged;
  for (auto& fac : out) {
    if (!merged.empty() && merged.back().poly == fac.poly) {
      merged.back().multiplicity += fac.multiplicity;
    } else {
      merged.push_back(std::move(fac));
    }
  }
  return merged;
}

std::vector<FpFactor> factor_mod_ell(std::span<const std::int64_t> coeffs, std::uint64_t ell) {
  if (!is_prime(ell)) throw Error(ErrorKind::InvalidArgument, "modulus " + std::to_string(ell) + " is not prime");
  return factor_mod_ell(FpPoly::from_signed(ell, coeffs));
}

std::vector<FpFactor> factor_mod_ell(std::span<const BigInt> coeffs, std::uint64_t ell) {
  if (!is_prime(ell)) throw Error(ErrorKind::InvalidArgument, "modulus " + std::to_string(ell) + " is not prime");
  std::vector<std::uint64_t> c;
  c.reserve(coeffs.size());
  for (const auto& v : coeffs) c.push_back(mod_floor(v, ell));
  return factor_mod_ell(FpPoly(ell, std::move(c)));
}

bool is_irreducible(const FpPoly& g) {
  const int n = g.degree();
  if (n <= 0) return false;
  const std::uint64_t ell = g.modulus();
  const FpPoly x = FpPoly::x(ell);
  FpPoly h = x % g;
  for (int d = 1; d < n; ++d) {
    h = powmod(h, ell, g);
    if (!gcd(g, h - x).is_one()) return false;
  }
  h = powmod(h, ell, g);
  return (h - x % g).is_zero();
}

}  // namespace weilmass
