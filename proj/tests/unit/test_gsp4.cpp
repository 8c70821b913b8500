#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "weilmass/gsp4.hpp"

using namespace weilmass;
using namespace weilmass::gsp4;

namespace {

Mat4 random_matrix(std::uint32_t ell, std::mt19937_64& rng) {
  std::array<std::int64_t, 16> e{};
  for (auto& v : e) v = static_cast<std::int64_t>(rng() % ell);
  return Mat4::from_rows(ell, e);
}

// Leibniz expansion over the 24 permutations.
std::int64_t leibniz_det(const std::array<std::int64_t, 16>& m, std::int64_t ell) {
  std::array<int, 4> perm{0, 1, 2, 3};
  std::int64_t total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) inversions += perm[i] > perm[j];
    std::int64_t term = 1;
    for (int r = 0; r < 4; ++r) term = term * m[4 * r + perm[r]] % ell;
    total = (total + (inversions % 2 ? ell - term : term)) % ell;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// c with g^T J g = c J, c = 0 allowed; nullopt when g^T J g is not a multiple of J.
std::optional<std::uint32_t> similitude_factor(const Mat4& g) {
  const Mat4 j = standard_j(g.ell());
  const Mat4 lhs = g.transpose() * j * g;
  const std::uint32_t c = lhs(0, 2);
  if (lhs == j.scaled(c)) return c;
  return std::nullopt;
}

// Synthetic Weil polynomial whose reduction mod ell has the given (a, b) and multiplier m.
WeilPolynomial with_residues(std::uint32_t ell, std::uint32_t m, std::int64_t a, std::int64_t b) {
  for (std::int64_t p = 2;; ++p) {
    if (!is_prime(static_cast<std::uint64_t>(p)) || p % ell != m) continue;
    return WeilPolynomial::make(p, 1, a, b);
  }
}

const GroupEnumeration& sp4_3() {
  static const GroupEnumeration en = GroupEnumeration::load_or_build(3, default_cache_dir());
  return en;
}

}  // namespace

TEST_CASE("charpoly agrees with det(tI - g)") {
  std::mt19937_64 rng(23);
  for (std::uint32_t ell : {5u, 7u, 11u, 13u}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Mat4 g = random_matrix(ell, rng);
      const auto cp = charpoly(g);
      CHECK(cp[4] == 1);
      for (std::uint32_t t = 0; t < ell; ++t) {
        std::array<std::int64_t, 16> m{};
        for (int i = 0; i < 16; ++i) m[i] = (ell - g(i / 4, i % 4)) % ell;
        for (int i = 0; i < 4; ++i) m[5 * i] = (m[5 * i] + t) % ell;
        std::uint64_t value = 0;
        for (int k = 4; k >= 0; --k) value = (value * t + cp[k]) % ell;
        CHECK(value == static_cast<std::uint64_t>(leibniz_det(m, ell)));
      }
      CHECK(determinant(g) == static_cast<std::uint32_t>(leibniz_det(
                                  [&] {
                                    std::array<std::int64_t, 16> m{};
                                    for (int i = 0; i < 16; ++i) m[i] = g(i / 4, i % 4);
                                    return m;
                                  }(),
                                  ell)));
    }
  }
}

TEST_CASE("inverse, multiplier and cyclicity") {
  std::mt19937_64 rng(29);
  for (std::uint32_t ell : {3u, 5u, 7u}) {
    for (int trial = 0; trial < 300; ++trial) {
      const Mat4 g = random_matrix(ell, rng);
      const auto inv = inverse(g);
      CHECK(inv.has_value() == (determinant(g) != 0));
      if (inv) CHECK(g * *inv == Mat4::identity(ell));
      const auto c = similitude_factor(g);
      const auto m = multiplier(g);
      CHECK(m.has_value() == (c.has_value() && *c != 0));
      if (m) CHECK(*m == *c);
      // A cyclic matrix's centralizer in M4 is F[g], of dimension 4.
      std::vector<std::vector<std::uint32_t>> powers;
      Mat4 p = Mat4::identity(ell);
      for (int k = 0; k < 4; ++k, p = p * g) powers.emplace_back(p.entries().begin(), p.entries().end());
      CHECK(is_cyclic(g) == (rank_mod(powers, ell) == 4));
    }
  }
  CHECK(eval_poly(charpoly_poly(Mat4::diag(7, 1, 2, 3, 4)), Mat4::diag(7, 1, 2, 3, 4)).is_zero());
}

TEST_CASE("packed arithmetic matches Mat4") {
  std::mt19937_64 rng(31);
  for (std::uint32_t ell : {2u, 3u, 5u, 7u, 11u, 13u}) {
    for (int trial = 0; trial < 300; ++trial) {
      const Mat4 x = random_matrix(ell, rng);
      const Mat4 y = random_matrix(ell, rng);
      CHECK(unpack(pack(x), ell) == x);
      CHECK(unpack(mul_packed(pack(x), pack(y), ell), ell) == x * y);
      const std::uint32_t s = static_cast<std::uint32_t>(rng() % ell);
      CHECK(unpack(scale_lower_rows(pack(x), s, ell), ell) == Mat4::diag(ell, 1, 1, s, s) * x);
    }
  }
}

TEST_CASE("group orders") {
  CHECK(sp4_order(3) == 51840);
  CHECK(sp4_order(5) == 9360000);
  CHECK(gsp4_order(3) == 2 * 51840);
}

TEST_CASE("Sp4(F_3) enumeration is the whole group") {
  const auto& en = sp4_3();
  REQUIRE(en.size() == 51840);
  const auto els = en.elements();
  CHECK(std::is_sorted(els.begin(), els.end()));
  CHECK(std::adjacent_find(els.begin(), els.end()) == els.end());
  std::mt19937_64 rng(37);
  for (int i = 0; i < 2000; ++i) {
    const Mat4 g = unpack(els[rng() % els.size()], 3);
    CHECK(similitude_factor(g) == std::optional<std::uint32_t>(1));
    const Mat4 h = unpack(els[rng() % els.size()], 3);
    CHECK(en.contains(pack(g * h)));
  }
  CHECK(multiplier(en.fiber_element(5, 2)) == std::optional<std::uint32_t>(2));

  const auto dir = default_cache_dir();
  const auto reloaded = GroupEnumeration::load(dir / "sp4_3.bin", 3);
  CHECK(std::equal(reloaded.elements().begin(), reloaded.elements().end(), els.begin(), els.end()));
}

TEST_CASE("magic reduction is exact on its whole range") {
  for (std::uint32_t ell = 2; ell <= 8; ++ell) {
    const std::uint64_t mul = kernels::magic_multiplier(ell);
    for (std::uint64_t x = 0; x < kernels::kMagicRange; ++x) CHECK_EQ((x * mul) >> kernels::kMagicShift, x / ell);
  }
  for (std::uint32_t ell = 2; ell <= kernels::kMaxVectorEll; ++ell) CHECK(kernels::vector_b_bound(ell) < kernels::kMagicRange);
}

TEST_CASE("fiber class index matches the characteristic polynomial") {
  const auto& en = sp4_3();
  for (std::uint32_t m = 1; m < 3; ++m) {
    const FiberIndex fi = index_fiber(en, m, kernels::Isa::Scalar);
    for (std::size_t i = 0; i < en.size(); i += 7) {
      const auto cp = charpoly(en.fiber_element(i, m));
      CHECK(fi.class_of[i] == fi.class_index(cp[3] == 0 ? 0 : 3 - cp[3], cp[2]));
    }
    CHECK(fi.nonzero_classes() == 9);
    CHECK(std::accumulate(fi.histogram.begin(), fi.histogram.end(), std::uint64_t{0}) == en.size());
  }
}

TEST_CASE("AVX2 kernel matches the scalar kernel") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 unavailable; equivalence not exercised");
    return;
  }
  const auto& en = sp4_3();
  for (std::uint32_t m = 1; m < 3; ++m) {
    std::vector<std::uint8_t> a(en.size()), b(en.size());
    kernels::fiber_classes_scalar(en.elements(), 3, m, a);
    kernels::fiber_classes_avx2(en.elements(), 3, m, b);
    CHECK(a == b);
  }
  std::mt19937_64 rng(41);
  for (std::uint32_t ell : {2u, 3u, 5u, 7u}) {
    // Arbitrary matrices, odd lengths to exercise the tail.
    std::vector<Packed> in(1003);
    for (auto& x : in) x = pack(random_matrix(ell, rng));
    for (std::uint32_t m = 1; m < ell; ++m) {
      std::vector<std::uint8_t> a(in.size()), b(in.size());
      kernels::fiber_classes_scalar(in, ell, m, a);
      kernels::fiber_classes_avx2(in, ell, m, b);
      CHECK(a == b);
    }
  }
}

TEST_CASE("fast Frobenius kind agrees with factorization") {
  for (std::int64_t q : {5, 7, 9, 11, 13, 25, 61}) {
    for (const auto& entry : enumerate_corpus(q)) {
      const WeilPolynomial& w = entry.poly;
      const WeilInvariants inv = invariants(w);
      for (std::uint32_t ell : primes_below(400)) {
        if (ell == 2 || static_cast<std::int64_t>(ell) == w.p) continue;
        if (mpz_divisible_ui_p(inv.delta_order.get_mpz_t(), ell) != 0) continue;
        CHECK(unramified_frobenius_kind(w, inv, ell) == frobenius_shape(w, ell).kind);
      }
    }
  }
}

TEST_CASE("centralizer formula matches brute force") {
  const auto& en = sp4_3();
  std::map<ShapeKind, int> seen;
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 4000; ++trial) {
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % 2);
    const Mat4 g = en.fiber_element(rng() % en.size(), m);
    const ElementShape es = shape_of_element(g);
    if (es.status != ElementStatus::Classified) continue;
    if (seen[es.shape->kind]++ >= 3) continue;
    const BigInt expect = centralizer_order_formula(es.shape->kind, 3);
    CHECK_MESSAGE(BigInt(static_cast<unsigned long>(centralizer_order_bruteforce(g, &en))) == expect,
                  to_string(*es.shape));
  }
  // The fiber sweep is an independent count of the same group.
  const Mat4 g = drl_s_representative(3, 1, ShapeSign::Plus);
  FiberOracle oracle(en);
  CHECK(oracle.centralizer_order_by_scan(g) == centralizer_order_bruteforce(g, &en));
  // F_3^* has two elements, so four distinct eigenvalues cannot occur.
  for (ShapeKind k : kAllShapes) CHECK_MESSAGE((seen[k] > 0) == (k != ShapeKind::Split), to_string(k));
}

TEST_CASE("centralizer formula at ell = 5, 7 from the linear solve") {
  // Eigenvalue pairs (1, 2) and (3, 4) both multiply to 2 mod 5.
  const Mat4 split = Mat4::diag(5, 1, 3, 2, 4);
  REQUIRE(shape_of_element(split).shape == ClassShape{ShapeKind::Split, ShapeSign::NotApplicable});
  CHECK(BigInt(static_cast<unsigned long>(centralizer_order_bruteforce(split))) ==
        centralizer_order_formula(ShapeKind::Split, 5));
  for (std::uint32_t ell : {5u, 7u}) {
    for (ShapeSign s : {ShapeSign::Plus, ShapeSign::Minus}) {
      const Mat4 g = drl_s_representative(ell, 1, s);
      CHECK(BigInt(static_cast<unsigned long>(centralizer_order_bruteforce(g))) ==
            centralizer_order_formula(ShapeKind::DRL_S, ell));
      const Mat4 r = rq2_representative(ell, smallest_nonsquare(ell), s);
      CHECK(BigInt(static_cast<unsigned long>(centralizer_order_bruteforce(r))) ==
            centralizer_order_formula(ShapeKind::RQ_2, ell));
    }
  }
}

TEST_CASE("cyclic elements with a fixed characteristic polynomial fill #classes conjugacy classes") {
  const auto& en = sp4_3();
  FiberOracle oracle(en);
  const BigInt group = gsp4_order(3);
  int compared = 0;
  for (std::uint32_t m = 1; m < 3; ++m) {
    for (std::int64_t a = 0; a < 3; ++a) {
      for (std::int64_t b = 0; b < 3; ++b) {
        const WeilPolynomial w = with_residues(3, m, a, b);
        ClassShape shape;
        try {
          shape = frobenius_shape(w, 3);
        } catch (const Error&) {
          continue;
        }
        const int classes = has_two_classes(shape.kind) ? 2 : 1;
        const CyclicCount c = oracle.count_cyclic_with_semisimplification(w, true);
        CHECK_MESSAGE(BigInt(static_cast<unsigned long>(c.total)) * centralizer_order_formula(shape.kind, 3) ==
                          group * classes,
                      to_string(shape));
        if (classes == 2) {
          REQUIRE(c.plus.has_value());
          CHECK(*c.plus == *c.minus);
        }
        ++compared;
      }
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("DRL-S representatives") {
  for (std::uint32_t ell : {3u, 5u, 7u}) {
    for (std::uint32_t a = 1; a <= (ell - 1) / 2; ++a) {
      const Mat4 plus = drl_s_representative(ell, a, ShapeSign::Plus);
      const Mat4 minus = drl_s_representative(ell, a, ShapeSign::Minus);
      for (const Mat4* g : {&plus, &minus}) {
        CHECK(multiplier(*g) == std::optional<std::uint32_t>(a * a % ell));
        CHECK(is_cyclic(*g));
        CHECK(charpoly(*g) == charpoly(plus));
      }
      CHECK_FALSE(find_similitude_conjugator(minus, plus).has_value());
      CHECK(shape_of_element(plus).shape == ClassShape{ShapeKind::DRL_S, ShapeSign::Plus});
      CHECK(shape_of_element(minus).shape == ClassShape{ShapeKind::DRL_S, ShapeSign::Minus});
      const Mat4 y = Mat4::diag(ell, 1, 2, 2, 1);
      if (multiplier(y)) {
        const Mat4 conj = y * plus * *inverse(y);
        CHECK(shape_of_element(conj).shape == shape_of_element(plus).shape);
      }
    }
  }
}

TEST_CASE("the DRL-S intertwiner is never a similitude") {
  for (std::uint32_t ell : {3u, 5u}) {
    const std::uint32_t x = smallest_nonsquare(ell);
    const Mat4 plus = drl_s_representative(ell, 1, ShapeSign::Plus);
    const Mat4 minus = drl_s_representative(ell, 1, ShapeSign::Minus);
    for (std::int64_t z1 = 0; z1 < ell; ++z1)
      for (std::int64_t z2 = 0; z2 < ell; ++z2)
        for (std::int64_t z3 = 0; z3 < ell; ++z3)
          for (std::int64_t z4 = 0; z4 < ell; ++z4) {
            const Mat4 z = drl_s_intertwiner(ell, x, z1, z2, z3, z4);
            CHECK(z * minus == plus * z);
            const bool proportional = similitude_factor(z).has_value();
            CHECK(proportional == ((z1 * z1 - z2 * z2 * x) % ell == 0));
            CHECK_FALSE(multiplier(z).has_value());
          }
  }
}

TEST_CASE("RQ-2 representatives") {
  for (std::uint32_t ell : {3u, 5u, 7u}) {
    const std::uint32_t m = smallest_nonsquare(ell);
    const Mat4 plus = rq2_representative(ell, m, ShapeSign::Plus);
    const Mat4 minus = rq2_representative(ell, m, ShapeSign::Minus);
    for (const Mat4* g : {&plus, &minus}) {
      CHECK(multiplier(*g) == std::optional<std::uint32_t>(m));
      CHECK(is_cyclic(*g));
      CHECK(classify_factorization(factor_mod_ell(charpoly_poly(*g)), m, ell) == ShapeKind::RQ_2);
    }
    CHECK_FALSE(find_similitude_conjugator(minus, plus).has_value());
    CHECK(shape_of_element(plus).shape == ClassShape{ShapeKind::RQ_2, ShapeSign::Plus});
    CHECK(shape_of_element(minus).shape == ClassShape{ShapeKind::RQ_2, ShapeSign::Minus});
  }
  CHECK_THROWS_AS(rq2_representative(5, 4, ShapeSign::Plus), Error);
}

TEST_CASE("classification rejects patterns outside every shape") {
  const std::uint32_t ell = 7;
  const FpPoly t = FpPoly::x(ell);
  auto lin = [&](std::uint64_t r) { return t - FpPoly::constant(ell, r); };
  // (T - 2)(T - 4)(T^2 + 1) is a valid multiplier-1 polynomial with the (1, 1, 2) pattern.
  const FpPoly mixed = lin(2) * lin(4) * (t * t + FpPoly::constant(ell, 1));
  CHECK_THROWS_AS(classify_factorization(factor_mod_ell(mixed), 1, ell), Error);
  // (T - 3)^4 with 3^2 = 2.
  const FpPoly qrl = lin(3) * lin(3) * lin(3) * lin(3);
  CHECK(classify_factorization(factor_mod_ell(qrl), 2, ell) == ShapeKind::QRL);
  CHECK_THROWS_AS(classify_factorization(factor_mod_ell(qrl), 3, ell), Error);
}
