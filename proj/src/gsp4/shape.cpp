#include "weilmass/gsp4/shape.hpp"

#include <algorithm>

namespace weilmass::gsp4 {

namespace {

std::uint32_t neg_mod(std::uint64_t a, std::uint32_t ell) { return static_cast<std::uint32_t>((ell - a % ell) % ell); }

std::uint32_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint32_t ell) {
  return static_cast<std::uint32_t>((a % ell) * (b % ell) % ell);
}

[[noreturn]] void mismatch(const std::vector<FpFactor>& factors, std::uint32_t m) {
  std::string desc;
  for (const auto& f : factors) {
    if (!desc.empty()) desc += " * ";
    desc += "(" + f.poly.to_string() + ")^" + std::to_string(f.multiplicity);
  }
  throw Error(ErrorKind::Validation, "pattern mismatch: " + desc + " with multiplier " + std::to_string(m));
}

bool is_square_mod(std::uint32_t v, std::uint32_t ell) {
  for (std::uint64_t t = 0; t < ell; ++t) {
    if (t * t % ell == v % ell) return true;
  }
  return false;
}

// Equations X * from - to * X = 0 in the 16 entries of X, row-major.
std::vector<std::vector<std::uint32_t>> intertwining_system(const Mat4& from, const Mat4& to) {
  const std::uint32_t ell = from.ell();
  std::vector<std::vector<std::uint32_t>> rows;
  rows.reserve(16);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::vector<std::uint32_t> row(16, 0);
      for (int k = 0; k < 4; ++k) {
        row[4 * i + k] = (row[4 * i + k] + from(k, j)) % ell;
        row[4 * k + j] = (row[4 * k + j] + ell - to(i, k)) % ell;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

bool has_two_classes(ShapeKind kind) { return kind == ShapeKind::DRL_S || kind == ShapeKind::RQ_2; }

bool is_regular_semisimple(ShapeKind kind) {
  return kind == ShapeKind::Split || kind == ShapeKind::DQ_S || kind == ShapeKind::DQ_I || kind == ShapeKind::Quartic;
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Split: return "Split";
    case ShapeKind::DQ_S: return "DQ-S";
    case ShapeKind::DQ_I: return "DQ-I";
    case ShapeKind::Quartic: return "Quartic";
    case ShapeKind::QRL: return "QRL";
    case ShapeKind::DRL_S: return "DRL-S";
    case ShapeKind::DRL_I: return "DRL-I";
    case ShapeKind::RQ_1: return "RQ-1";
    case ShapeKind::RQ_2: return "RQ-2";
  }
  return "?";
}

std::string to_string(const ClassShape& shape) {
  std::string s = to_string(shape.kind);
  if (shape.sign == ShapeSign::Plus) s += "+";
  if (shape.sign == ShapeSign::Minus) s += "-";
  return s;
}

ShapeKind shape_kind_from_string(const std::string& s) {
  for (ShapeKind k : kAllShapes) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown shape " + s);
}

std::string to_string(ElementStatus status) {
  switch (status) {
    case ElementStatus::Classified: return "classified";
    case ElementStatus::NotSimilitude: return "not_similitude";
    case ElementStatus::NonCyclicSemisimple: return "non_cyclic_semisimple";
    case ElementStatus::NonCyclicNonSemisimple: return "non_cyclic_non_semisimple";
    case ElementStatus::Irrelevant: return "irrelevant";
  }
  return "?";
}

ShapeKind classify_factorization(const std::vector<FpFactor>& factors, std::uint32_t m, std::uint32_t ell) {
  m %= ell;
  std::vector<int> degs;
  std::vector<unsigned> mults;
  int total = 0;
  for (const auto& f : factors) {
    degs.push_back(f.poly.degree());
    mults.push_back(f.multiplicity);
    total += f.poly.degree() * static_cast<int>(f.multiplicity);
  }
  if (total != 4) mismatch(factors, m);
  const bool all_simple = std::all_of(mults.begin(), mults.end(), [](unsigned e) { return e == 1; });
  auto root = [&](std::size_t i) { return neg_mod(factors[i].poly.coeff(0), ell); };

  if (all_simple) {
    if (factors.size() == 4) return ShapeKind::Split;
    if (factors.size() == 1) return ShapeKind::Quartic;
    if (factors.size() == 2 && degs[0] == 2 && degs[1] == 2) {
      const auto g1 = static_cast<std::uint32_t>(factors[0].poly.coeff(0));
      const auto g2 = static_cast<std::uint32_t>(factors[1].poly.coeff(0));
      if (g1 == m && g2 == m) return ShapeKind::DQ_S;
      if (mul_mod(g1, g2, ell) == mul_mod(m, m, ell)) return ShapeKind::DQ_I;
    }
    mismatch(factors, m);
  }
  if (factors.size() == 1 && degs[0] == 1 && mults[0] == 4) {
    const std::uint32_t a = root(0);
    if (mul_mod(a, a, ell) == m) return ShapeKind::QRL;
    mismatch(factors, m);
  }
  if (factors.size() == 2 && degs[0] == 1 && degs[1] == 1 && mults[0] == 2 && mults[1] == 2) {
    const std::uint32_t a1 = root(0);
    const std::uint32_t a2 = root(1);
    if (a2 == neg_mod(a1, ell) && mul_mod(a1, a1, ell) == m) return ShapeKind::DRL_S;
    if (mul_mod(a1, a2, ell) == m) return ShapeKind::DRL_I;
    mismatch(factors, m);
  }
  if (factors.size() == 1 && degs[0] == 2 && mults[0] == 2) {
    const auto g0 = static_cast<std::uint32_t>(factors[0].poly.coeff(0));
    if (g0 == m) return ShapeKind::RQ_1;
    if (g0 == neg_mod(m, ell) && factors[0].poly.coeff(1) == 0) return ShapeKind::RQ_2;
  }
  mismatch(factors, m);
}

ClassShape frobenius_shape(const WeilPolynomial& w, std::uint32_t ell) {
  if (static_cast<std::int64_t>(ell) == w.p) throw Error(ErrorKind::InvalidArgument, "frobenius_shape needs ell != p");
  const auto c = w.coefficients();
  const auto factors = factor_mod_ell(std::span<const BigInt>(c.data(), c.size()), ell);
  const auto m = static_cast<std::uint32_t>(mod_floor(w.q, ell));
  return ClassShape{classify_factorization(factors, m, ell), ShapeSign::NotApplicable};
}

ShapeKind unramified_frobenius_kind(const WeilPolynomial& w, const WeilInvariants& inv, std::uint32_t ell) {
  const std::uint64_t d = mod_floor(inv.delta_fplus, ell);
  const std::uint64_t n = mod_floor(inv.norm_term, ell);
  if (ell == 2 || static_cast<std::int64_t>(ell) == w.p || d == 0 || n == 0) {
    throw Error(ErrorKind::InvalidArgument, "unramified_frobenius_kind: ell = " + std::to_string(ell) + " is ramified");
  }
  auto is_square = [ell](std::uint64_t x) { return mod_pow(x, (ell - 1) / 2, ell) == 1; };
  // f = (T^2 - x1 T + q)(T^2 - x2 T + q) over the splitting field of f+, and T^2 - x T + q
  // splits over F_ell(x) iff x^2 - 4q is a square there, i.e. iff its norm is a square in F_ell.
  // The norm of x1^2 - 4q is norm_term.
  if (!is_square(d)) return is_square(n) ? ShapeKind::DQ_I : ShapeKind::Quartic;
  if (!is_square(n)) {
    throw Error(ErrorKind::Validation, "pattern mismatch: f mod " + std::to_string(ell) + " is (1, 1, 2) for " + w.to_string());
  }
  const std::uint64_t r = *sqrt_mod(d, ell);
  const std::uint64_t half = (ell + 1) / 2;
  const std::uint64_t x1 = (static_cast<std::uint64_t>(mod_floor(w.a, ell)) + r) % ell * half % ell;
  const std::uint64_t m = static_cast<std::uint64_t>(mod_floor(w.q, ell));
  const std::uint64_t e = (x1 * x1 % ell + ell - 4 * m % ell) % ell;
  return is_square(e) ? ShapeKind::Split : ShapeKind::DQ_S;
}

BigInt centralizer_order_formula(ShapeKind kind, std::uint64_t ell) {
  const BigInt l(static_cast<unsigned long>(ell));
  switch (kind) {
    case ShapeKind::Split: return (l - 1) * (l - 1) * (l - 1);
    case ShapeKind::DQ_S: return (l + 1) * (l + 1) * (l - 1);
    case ShapeKind::DQ_I: return (l + 1) * (l - 1) * (l - 1);
    case ShapeKind::Quartic: return (l * l + 1) * (l - 1);
    case ShapeKind::QRL: return l * l * (l - 1);
    case ShapeKind::DRL_S: return 2 * l * l * (l - 1);
    case ShapeKind::DRL_I: return l * (l - 1) * (l - 1);
    case ShapeKind::RQ_1: return l * (l * l - 1);
    case ShapeKind::RQ_2: return 2 * l * l * (l - 1);
  }
  return 0;
}

std::uint32_t smallest_nonsquare(std::uint32_t ell) {
  for (std::uint32_t x = 2; x < ell; ++x) {
    if (!is_square_mod(x, ell)) return x;
  }
  throw Error(ErrorKind::InvalidArgument, "F_" + std::to_string(ell) + " has no nonsquare");
}

Mat4 drl_s_representative(std::uint32_t ell, std::uint32_t a, ShapeSign sign) {
  const std::int64_t t = sign == ShapeSign::Minus ? smallest_nonsquare(ell) : 1;
  const std::int64_t ai = a;
  return Mat4::from_rows(ell, {ai, 0, 1, 0, 0, -ai, 0, t, 0, 0, ai, 0, 0, 0, 0, -ai});
}

namespace {

Mat4 rq2_with_twist(std::uint32_t ell, std::uint32_t m, std::int64_t s0, std::int64_t s1, std::int64_t s2) {
  const std::int64_t mi = m;
  const auto minv = static_cast<std::int64_t>(inv_mod(m, ell));
  // A = [[0, m], [1, 0]] so A S / m = [[m s1, m s2], [s0, s1]] / m.
  const std::array<std::int64_t, 4> a{0, mi, 1, 0};
  const std::array<std::int64_t, 4> b{s1, s2, s0 * minv, s1 * minv};
  const std::array<std::int64_t, 4> d{0, 1, mi, 0};
  return Mat4::from_blocks(ell, a, b, {0, 0, 0, 0}, d);
}

}  // namespace

Mat4 rq2_representative(std::uint32_t ell, std::uint32_t m, ShapeSign sign) {
  m %= ell;
  if (m == 0 || is_square_mod(m, ell)) throw Error(ErrorKind::InvalidArgument, "RQ-2 needs a nonsquare multiplier");
  // S = I is cyclic unless m = -1, where (g^2 - m) vanishes; then the first cyclic twist is used.
  std::optional<Mat4> plus;
  const Mat4 identity_twist = rq2_with_twist(ell, m, 1, 0, 1);
  if (is_cyclic(identity_twist)) plus = identity_twist;
  for (std::uint32_t s0 = 0; s0 < ell; ++s0) {
    for (std::uint32_t s1 = 0; s1 < ell; ++s1) {
      for (std::uint32_t s2 = 0; s2 < ell; ++s2) {
        if ((std::uint64_t{s0} * s2 + std::uint64_t{ell - s1} * s1) % ell == 0) continue;
        const Mat4 cand = rq2_with_twist(ell, m, s0, s1, s2);
        if (!is_cyclic(cand)) continue;
        if (!plus) plus = cand;
        if (sign != ShapeSign::Minus) return *plus;
        if (!find_similitude_conjugator(cand, *plus)) return cand;
      }
    }
  }
  throw Error(ErrorKind::OracleMismatch, "no second RQ-2 class found");
}

std::optional<Mat4> find_similitude_conjugator(const Mat4& from, const Mat4& to) {
  const std::uint32_t ell = from.ell();
  const auto basis = null_space(intertwining_system(from, to), 16, ell);
  const std::size_t d = basis.size();
  double combos = 1;
  for (std::size_t i = 0; i < d; ++i) combos *= ell;
  if (combos > 5e7) throw Error(ErrorKind::Budget, "intertwiner space too large to scan");
  std::vector<std::uint32_t> coef(d, 0);
  std::array<std::int64_t, 16> entries{};
  while (true) {
    std::size_t k = 0;
    while (k < d && ++coef[k] == ell) coef[k++] = 0;
    if (k == d) return std::nullopt;
    for (int i = 0; i < 16; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += std::uint64_t{coef[j]} * basis[j][i];
      entries[i] = static_cast<std::int64_t>(acc % ell);
    }
    const Mat4 x = Mat4::from_rows(ell, entries);
    if (multiplier(x)) return x;
  }
}

Mat4 drl_s_intertwiner(std::uint32_t ell, std::uint32_t x, std::int64_t z1, std::int64_t z2, std::int64_t z3,
                       std::int64_t z4) {
  return Mat4::from_rows(ell, {z1, 0, z3, 0, 0, z2, 0, z4, 0, 0, z1, 0, 0, 0, 0, z2 * static_cast<std::int64_t>(x)});
}

ElementShape shape_of_element(const Mat4& g) {
  const std::uint32_t ell = g.ell();
  const auto m = multiplier(g);
  if (!m) return {ElementStatus::NotSimilitude, std::nullopt};
  const FpPoly f = charpoly_poly(g);
  const auto factors = factor_mod_ell(f);
  if (!is_cyclic(g)) {
    FpPoly rad = FpPoly::constant(ell, 1);
    for (const auto& fac : factors) rad = rad * fac.poly;
    const bool semisimple = eval_poly(rad, g).is_zero();
    return {semisimple ? ElementStatus::NonCyclicSemisimple : ElementStatus::NonCyclicNonSemisimple, std::nullopt};
  }
  ShapeKind kind;
  try {
    kind = classify_factorization(factors, *m, ell);
  } catch (const Error&) {
    return {ElementStatus::Irrelevant, std::nullopt};
  }
  ClassShape shape{kind, ShapeSign::NotApplicable};
  if (has_two_classes(kind)) {
    Mat4 plus;
    Mat4 minus;
    if (kind == ShapeKind::DRL_S) {
      const std::uint32_t r = neg_mod(factors[0].poly.coeff(0), ell);
      const std::uint32_t a = std::min(r, neg_mod(r, ell));
      plus = drl_s_representative(ell, a, ShapeSign::Plus);
      minus = drl_s_representative(ell, a, ShapeSign::Minus);
    } else {
      plus = rq2_representative(ell, *m, ShapeSign::Plus);
      minus = rq2_representative(ell, *m, ShapeSign::Minus);
    }
    if (find_similitude_conjugator(g, plus)) {
      shape.sign = ShapeSign::Plus;
    } else if (find_similitude_conjugator(g, minus)) {
      shape.sign = ShapeSign::Minus;
    } else {
      throw Error(ErrorKind::OracleMismatch, to_string(kind) + " element conjugate to neither representative");
    }
  }
  return {ElementStatus::Classified, shape};
}

}  // namespace weilmass::gsp4
