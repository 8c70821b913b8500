#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "weilmass/gsp4/kernels.hpp"
#include "weilmass/gsp4/matrix.hpp"
#include "weilmass/gsp4/shape.hpp"
#include "weilmass/weil.hpp"

namespace weilmass::gsp4 {

/// ell^4 (ell^2 - 1)(ell^4 - 1).
BigInt sp4_order(std::uint64_t ell);
/// (ell - 1) |Sp4(F_ell)|.
BigInt gsp4_order(std::uint64_t ell);

struct EnumerationOptions {
  /// ell = 7 and beyond need several GB; refused unless set.
  bool allow_big = false;
};

/// Every element of Sp4(F_ell), packed and sorted. The fiber of multiplier m is
/// diag(1, 1, m, m) * Sp4.
class GroupEnumeration {
 public:
  /// Breadth-first closure from a fixed generating set.
  static GroupEnumeration build(std::uint32_t ell, EnumerationOptions opts = {});

  /// Reads `<dir>/sp4_<ell>.bin` when present and valid, otherwise builds and writes it.
  static GroupEnumeration load_or_build(std::uint32_t ell, const std::filesystem::path& dir,
                                        EnumerationOptions opts = {});

  static GroupEnumeration load(const std::filesystem::path& file, std::uint32_t ell);
  void save(const std::filesystem::path& file) const;

  std::uint32_t ell() const noexcept { return ell_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::span<const Packed> elements() const noexcept { return elements_; }
  bool contains(Packed x) const;

  /// diag(1, 1, m, m) * elements()[i].
  Mat4 fiber_element(std::size_t i, std::uint32_t m) const;

 private:
  std::uint32_t ell_ = 0;
  std::vector<Packed> elements_;
};

inline constexpr std::uint32_t kCacheVersion = 1;

/// Cache directory from WEIL_MASS_CACHE, falling back to the system temp directory.
std::filesystem::path default_cache_dir();

/// Class index (A * ell + B) of every element of one multiplier fiber, plus its histogram.
struct FiberIndex {
  std::uint32_t ell = 0;
  std::uint32_t multiplier = 0;
  std::vector<std::uint8_t> class_of;
  std::vector<std::uint64_t> histogram;

  std::size_t class_index(std::int64_t a, std::int64_t b) const;
  std::size_t nonzero_classes() const;
};

FiberIndex index_fiber(const GroupEnumeration& en, std::uint32_t m, kernels::Isa isa = kernels::detect_isa());

struct CyclicCount {
  std::uint64_t total = 0;
  /// Filled only when signs were requested and the shape has two classes.
  std::optional<std::uint64_t> plus;
  std::optional<std::uint64_t> minus;
};

/// Brute-force counts over a fixed enumeration, with fiber indices memoized per multiplier.
class FiberOracle {
 public:
  explicit FiberOracle(const GroupEnumeration& en, kernels::Isa isa = kernels::detect_isa());

  const GroupEnumeration& enumeration() const noexcept { return en_; }
  const FiberIndex& fiber(std::uint32_t m);

  /// #{gamma in GSp4(F_ell)^(q) : f_gamma = f mod ell}.
  std::uint64_t count_charpoly_in_fiber(const WeilPolynomial& w);

  /// Cyclic gamma in the fiber of q whose characteristic polynomial is f mod ell. For a cyclic
  /// element this fixes the semisimple part. With `signs`, two-class shapes are split by sign.
  CyclicCount count_cyclic_with_semisimplification(const WeilPolynomial& w, bool signs = false);

  /// Semisimple gamma in the fiber of m with characteristic polynomial g^2,
  /// g = T^2 - ga T + gb. Throws when g has a repeated root mod ell.
  std::uint64_t count_semisimple_with_charpoly(std::int64_t ga, std::int64_t gb, std::uint32_t m);

  /// #Z_{GSp4}(g) by scanning every fiber.
  std::uint64_t centralizer_order_by_scan(const Mat4& g);

 private:
  const GroupEnumeration& en_;
  kernels::Isa isa_;
  std::map<std::uint32_t, FiberIndex> fibers_;
};

/// #{c in GSp4(F_ell) : c g = g c}. Solves c g = g c and filters the solution space by the
/// similitude condition; when that space is larger than the group and an enumeration is
/// supplied, scans the group instead.
std::uint64_t centralizer_order_bruteforce(const Mat4& g, const GroupEnumeration* en = nullptr);

}  // namespace weilmass::gsp4
