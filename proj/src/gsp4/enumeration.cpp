#include "weilmass/gsp4/enumeration.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>

namespace weilmass::gsp4 {

BigInt sp4_order(std::uint64_t ell) {
  const BigInt l(static_cast<unsigned long>(ell));
  const BigInt l2 = l * l;
  return l2 * l2 * (l2 - 1) * (l2 * l2 - 1);
}

BigInt gsp4_order(std::uint64_t ell) { return BigInt(static_cast<unsigned long>(ell - 1)) * sp4_order(ell); }

namespace {

// Product of packed matrices with the final reduction done by table lookup; acc <= 4 (ell-1)^2.
struct PackedMultiplier {
  explicit PackedMultiplier(std::uint32_t ell) : reduce(4 * (ell - 1) * (ell - 1) + 1) {
    for (std::uint32_t i = 0; i < reduce.size(); ++i) reduce[i] = static_cast<std::uint8_t>(i % ell);
  }

  Packed operator()(Packed x, Packed y) const {
    std::uint32_t a[16];
    std::uint32_t b[16];
    for (int i = 0; i < 16; ++i) {
      a[i] = static_cast<std::uint32_t>((x >> (4 * i)) & 0xF);
      b[i] = static_cast<std::uint32_t>((y >> (4 * i)) & 0xF);
    }
    Packed out = 0;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        const std::uint32_t acc =
            a[4 * r] * b[c] + a[4 * r + 1] * b[4 + c] + a[4 * r + 2] * b[8 + c] + a[4 * r + 3] * b[12 + c];
        out |= static_cast<Packed>(reduce[acc]) << (4 * (4 * r + c));
      }
    }
    return out;
  }

  std::vector<std::uint8_t> reduce;
};

// Open addressing with linear probing; 0 marks an empty slot (the zero matrix is never a member).
class PackedSet {
 public:
  explicit PackedSet(std::size_t expected) {
    std::size_t cap = 1024;
    bits_ = 10;
    while (static_cast<double>(cap) * 0.6 < static_cast<double>(expected)) {
      cap <<= 1;
      ++bits_;
    }
    slots_.assign(cap, 0);
    mask_ = cap - 1;
  }

  bool insert(Packed x) {
    std::size_t h = static_cast<std::size_t>((x * 0x9E3779B97F4A7C15ULL) >> (64 - bits_));
    while (true) {
      const Packed s = slots_[h];
      if (s == x) return false;
      if (s == 0) {
        slots_[h] = x;
        return true;
      }
      h = (h + 1) & mask_;
    }
  }

 private:
  std::vector<Packed> slots_;
  std::size_t mask_ = 0;
  int bits_ = 0;
};

std::vector<Packed> generators(std::uint32_t ell) {
  std::vector<Mat4> gens;
  gens.push_back(standard_j(ell));
  // [[I, S], [0, I]] for a basis of symmetric S.
  for (const std::array<std::int64_t, 4>& s : {std::array<std::int64_t, 4>{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 1, 0}}) {
    gens.push_back(Mat4::from_blocks(ell, {1, 0, 0, 1}, s, {0, 0, 0, 0}, {1, 0, 0, 1}));
  }
  // [[A, 0], [0, A^{-T}]] for generators of GL2.
  std::int64_t g = 1;
  for (std::int64_t c = 2; c < ell; ++c) {
    std::int64_t x = c;
    std::int64_t order = 1;
    while (x != 1) {
      x = x * c % ell;
      ++order;
    }
    if (order == static_cast<std::int64_t>(ell) - 1) {
      g = c;
      break;
    }
  }
  const auto ginv = static_cast<std::int64_t>(inv_mod(static_cast<std::uint64_t>(g), ell));
  gens.push_back(Mat4::from_blocks(ell, {g, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {ginv, 0, 0, 1}));
  gens.push_back(Mat4::from_blocks(ell, {1, 1, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, -1, 1}));
  gens.push_back(Mat4::from_blocks(ell, {0, 1, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 1, 0}));
  std::vector<Packed> out;
  for (const auto& m : gens) {
    if (multiplier(m) != std::optional<std::uint32_t>(1)) {
      throw Error(ErrorKind::OracleMismatch, "Sp4 generator is not symplectic");
    }
    out.push_back(pack(m));
  }
  return out;
}

struct CacheHeader {
  char magic[8];
  std::uint32_t version;
  std::uint32_t ell;
  std::uint64_t count;
};

constexpr char kMagic[8] = {'W', 'M', 'S', 'P', '4', 'E', 'N', 0};

}  // namespace

GroupEnumeration GroupEnumeration::build(std::uint32_t ell, EnumerationOptions opts) {
  if (ell < 2 || !is_prime(ell) || ell >= kMaxPackedEll) {
    throw Error(ErrorKind::InvalidArgument, "enumeration needs a prime ell below 16");
  }
  if (ell > 5 && !opts.allow_big) {
    throw Error(ErrorKind::Budget, "Sp4(F_" + std::to_string(ell) + ") enumeration exceeds the default budget");
  }
  const std::size_t expected = sp4_order(ell).get_ui();
  const auto gens = generators(ell);
  const PackedMultiplier mul(ell);
  PackedSet seen(expected);
  GroupEnumeration en;
  en.ell_ = ell;
  en.elements_.reserve(expected);
  const Packed id = pack(Mat4::identity(ell));
  seen.insert(id);
  en.elements_.push_back(id);
  for (std::size_t i = 0; i < en.elements_.size(); ++i) {
    const Packed x = en.elements_[i];
    for (const Packed g : gens) {
      const Packed y = mul(x, g);
      if (seen.insert(y)) en.elements_.push_back(y);
    }
  }
  if (en.elements_.size() != expected) {
    throw Error(ErrorKind::OracleMismatch, "Sp4 closure produced " + std::to_string(en.elements_.size()) +
                                               " elements, expected " + std::to_string(expected));
  }
  std::sort(en.elements_.begin(), en.elements_.end());
  return en;
}

GroupEnumeration GroupEnumeration::load(const std::filesystem::path& file, std::uint32_t ell) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + file.string());
  CacheHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!in || std::memcmp(h.magic, kMagic, sizeof kMagic) != 0 || h.version != kCacheVersion || h.ell != ell ||
      h.count != sp4_order(ell).get_ui()) {
    throw Error(ErrorKind::InvalidArgument, "stale or foreign enumeration cache " + file.string());
  }
  GroupEnumeration en;
  en.ell_ = ell;
  en.elements_.resize(h.count);
  in.read(reinterpret_cast<char*>(en.elements_.data()), static_cast<std::streamsize>(h.count * sizeof(Packed)));
  if (!in) throw Error(ErrorKind::InvalidArgument, "truncated enumeration cache " + file.string());
  if (!std::is_sorted(en.elements_.begin(), en.elements_.end())) {
    throw Error(ErrorKind::InvalidArgument, "unsorted enumeration cache " + file.string());
  }
  return en;
}

void GroupEnumeration::save(const std::filesystem::path& file) const {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    CacheHeader h{};
    std::memcpy(h.magic, kMagic, sizeof kMagic);
    h.version = kCacheVersion;
    h.ell = ell_;
    h.count = elements_.size();
    out.write(reinterpret_cast<const char*>(&h), sizeof h);
    out.write(reinterpret_cast<const char*>(elements_.data()),
              static_cast<std::streamsize>(elements_.size() * sizeof(Packed)));
    if (!out) throw Error(ErrorKind::InvalidArgument, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

GroupEnumeration GroupEnumeration::load_or_build(std::uint32_t ell, const std::filesystem::path& dir,
                                                 EnumerationOptions opts) {
  const std::filesystem::path file = dir / ("sp4_" + std::to_string(ell) + ".bin");
  if (std::filesystem::exists(file)) {
    try {
      return load(file, ell);
    } catch (const Error&) {
      // Rebuilt and overwritten below.
    }
  }
  GroupEnumeration en = build(ell, opts);
  try {
    en.save(file);
  } catch (const std::exception&) {
    // An unwritable cache only costs a rebuild next time.
  }
  return en;
}

bool GroupEnumeration::contains(Packed x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

Mat4 GroupEnumeration::fiber_element(std::size_t i, std::uint32_t m) const {
  return unpack(scale_lower_rows(elements_[i], m % ell_, ell_), ell_);
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("WEIL_MASS_CACHE"); env != nullptr && env[0] != '\0') return env;
  return std::filesystem::temp_directory_path() / "weil-mass-cache";
}

std::size_t FiberIndex::class_index(std::int64_t a, std::int64_t b) const {
  return static_cast<std::size_t>(mod_floor(a, ell) * ell + mod_floor(b, ell));
}

std::size_t FiberIndex::nonzero_classes() const {
  return static_cast<std::size_t>(std::count_if(histogram.begin(), histogram.end(), [](auto c) { return c != 0; }));
}

FiberIndex index_fiber(const GroupEnumeration& en, std::uint32_t m, kernels::Isa isa) {
  const std::uint32_t ell = en.ell();
  if (m % ell == 0) throw Error(ErrorKind::InvalidArgument, "multiplier must be a unit mod ell");
  FiberIndex fi;
  fi.ell = ell;
  fi.multiplier = m % ell;
  fi.class_of.resize(en.size());
  kernels::fiber_classes(en.elements(), ell, fi.multiplier, fi.class_of, isa);
  fi.histogram.assign(static_cast<std::size_t>(ell) * ell, 0);
  for (const auto c : fi.class_of) ++fi.histogram[c];
  return fi;
}

FiberOracle::FiberOracle(const GroupEnumeration& en, kernels::Isa isa) : en_(en), isa_(isa) {}

const FiberIndex& FiberOracle::fiber(std::uint32_t m) {
  m %= en_.ell();
  auto it = fibers_.find(m);
  if (it == fibers_.end()) it = fibers_.emplace(m, index_fiber(en_, m, isa_)).first;
  return it->second;
}

namespace {

std::uint32_t fiber_multiplier(const WeilPolynomial& w, std::uint32_t ell) {
  if (w.p == static_cast<std::int64_t>(ell)) throw Error(ErrorKind::InvalidArgument, "fiber counts need ell != p");
  return static_cast<std::uint32_t>(mod_floor(w.q, ell));
}

}  // namespace

std::uint64_t FiberOracle::count_charpoly_in_fiber(const WeilPolynomial& w) {
  const FiberIndex& fi = fiber(fiber_multiplier(w, en_.ell()));
  return fi.histogram[fi.class_index(w.a, w.b)];
}

CyclicCount FiberOracle::count_cyclic_with_semisimplification(const WeilPolynomial& w, bool signs) {
  const std::uint32_t ell = en_.ell();
  const std::uint32_t m = fiber_multiplier(w, ell);
  const FiberIndex& fi = fiber(m);
  const auto target = static_cast<std::uint8_t>(fi.class_index(w.a, w.b));
  const bool split_signs = signs && has_two_classes(frobenius_shape(w, ell).kind);
  CyclicCount out;
  if (split_signs) {
    out.plus = 0;
    out.minus = 0;
  }
  for (std::size_t i = 0; i < en_.size(); ++i) {
    if (fi.class_of[i] != target) continue;
    const Mat4 g = en_.fiber_element(i, m);
    if (!is_cyclic(g)) continue;
    ++out.total;
    if (split_signs) {
      const ElementShape es = shape_of_element(g);
      if (es.shape && es.shape->sign == ShapeSign::Plus) {
        ++*out.plus;
      } else if (es.shape && es.shape->sign == ShapeSign::Minus) {
        ++*out.minus;
      } else {
        throw Error(ErrorKind::OracleMismatch, "cyclic element of a two-class shape without a sign");
      }
    }
  }
  return out;
}

std::uint64_t FiberOracle::count_semisimple_with_charpoly(std::int64_t ga, std::int64_t gb, std::uint32_t m) {
  const std::uint32_t ell = en_.ell();
  const std::int64_t l = ell;
  const std::int64_t a = mod_floor(ga, l);
  const std::int64_t b = mod_floor(gb, l);
  if (mod_floor(a * a - 4 * b, l) == 0) {
    throw Error(ErrorKind::Validation, "T^2 - aT + b has a repeated root mod " + std::to_string(ell));
  }
  const std::int64_t mm = mod_floor(m, l);
  // g^2 = T^4 - 2a T^3 + (a^2 + 2b) T^2 - 2ab T + b^2 against T^4 - A T^3 + B T^2 - m A T + m^2.
  if (mod_floor(mm * 2 * a - 2 * a * b, l) != 0 || mod_floor(mm * mm - b * b, l) != 0) return 0;
  const FiberIndex& fi = fiber(static_cast<std::uint32_t>(mm));
  const auto target = static_cast<std::uint8_t>(fi.class_index(2 * a, a * a + 2 * b));
  const FpPoly g = FpPoly::from_signed(ell, std::array<std::int64_t, 3>{b, -a, 1});
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < en_.size(); ++i) {
    if (fi.class_of[i] != target) continue;
    if (eval_poly(g, en_.fiber_element(i, static_cast<std::uint32_t>(mm))).is_zero()) ++count;
  }
  return count;
}

std::uint64_t FiberOracle::centralizer_order_by_scan(const Mat4& g) {
  const std::uint32_t ell = en_.ell();
  if (g.ell() != ell) throw Error(ErrorKind::InvalidArgument, "modulus mismatch");
  std::uint64_t count = 0;
  for (std::uint32_t m = 1; m < ell; ++m) {
    for (std::size_t i = 0; i < en_.size(); ++i) {
      const Mat4 c = en_.fiber_element(i, m);
      if (c * g == g * c) ++count;
    }
  }
  return count;
}

std::uint64_t centralizer_order_bruteforce(const Mat4& g, const GroupEnumeration* en) {
  const std::uint32_t ell = g.ell();
  std::vector<std::vector<std::uint32_t>> rows;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // (C g - g C)_{ij}
      std::vector<std::uint32_t> row(16, 0);
      for (int k = 0; k < 4; ++k) {
        row[4 * i + k] = (row[4 * i + k] + g(k, j)) % ell;
        row[4 * k + j] = (row[4 * k + j] + ell - g(i, k)) % ell;
      }
      rows.push_back(std::move(row));
    }
  }
  const auto basis = null_space(std::move(rows), 16, ell);
  const std::size_t d = basis.size();
  BigInt space = 1;
  for (std::size_t i = 0; i < d; ++i) space *= ell;
  if (en != nullptr && space > gsp4_order(ell)) {
    FiberOracle oracle(*en);
    return oracle.centralizer_order_by_scan(g);
  }
  if (space > 50'000'000) throw Error(ErrorKind::Budget, "commutant too large to scan without an enumeration");
  std::vector<std::uint32_t> coef(d, 0);
  std::array<std::int64_t, 16> entries{};
  std::uint64_t count = 0;
  while (true) {
    std::size_t k = 0;
    while (k < d && ++coef[k] == ell) coef[k++] = 0;
    if (k == d) break;
    for (int i = 0; i < 16; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += std::uint64_t{coef[j]} * basis[j][i];
      entries[i] = static_cast<std::int64_t>(acc % ell);
    }
    if (multiplier(Mat4::from_rows(ell, entries))) ++count;
  }
  return count;
}

}  // namespace weilmass::gsp4
