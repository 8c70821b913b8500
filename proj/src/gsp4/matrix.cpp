#include "weilmass/gsp4/matrix.hpp"

#include <utility>

namespace weilmass::gsp4 {

namespace {

std::uint32_t reduce(std::int64_t v, std::uint32_t ell) {
  const std::int64_t r = v % static_cast<std::int64_t>(ell);
  return static_cast<std::uint32_t>(r < 0 ? r + ell : r);
}

std::uint32_t mulmod(std::uint64_t a, std::uint64_t b, std::uint32_t ell) {
  return static_cast<std::uint32_t>((a * b) % ell);
}

std::uint32_t submod(std::uint32_t a, std::uint32_t b, std::uint32_t ell) { return a >= b ? a - b : a + ell - b; }

std::uint32_t addmod(std::uint32_t a, std::uint32_t b, std::uint32_t ell) {
  const std::uint32_t s = a + b;
  return s >= ell ? s - ell : s;
}

std::uint32_t invmod(std::uint32_t a, std::uint32_t ell) { return static_cast<std::uint32_t>(inv_mod(a, ell)); }

void require_ell(std::uint32_t ell) {
  if (ell < 2 || ell >= (1U << 16) || !is_prime(ell)) {
    throw Error(ErrorKind::InvalidArgument, "matrix modulus must be a prime below 2^16");
  }
}

// Determinant of the principal submatrix on `idx` (size k) by elimination.
std::uint32_t principal_minor(const Mat4& g, const int* idx, int k) {
  const std::uint32_t ell = g.ell();
  std::uint32_t a[4][4];
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) a[i][j] = g(idx[i], idx[j]);
  }
  std::uint32_t det = 1;
  for (int col = 0; col < k; ++col) {
    int piv = -1;
    for (int r = col; r < k; ++r) {
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int j = 0; j < k; ++j) std::swap(a[piv][j], a[col][j]);
      det = submod(0, det, ell);
    }
    det = mulmod(det, a[col][col], ell);
    const std::uint32_t inv = invmod(a[col][col], ell);
    for (int r = col + 1; r < k; ++r) {
      if (a[r][col] == 0) continue;
      const std::uint32_t f = mulmod(a[r][col], inv, ell);
      for (int j = col; j < k; ++j) a[r][j] = submod(a[r][j], mulmod(f, a[col][j], ell), ell);
    }
  }
  return det;
}

}  // namespace

Mat4::Mat4(std::uint32_t ell) : ell_(ell) { require_ell(ell); }

Mat4 Mat4::identity(std::uint32_t ell) { return diag(ell, 1, 1, 1, 1); }

Mat4 Mat4::diag(std::uint32_t ell, std::int64_t d0, std::int64_t d1, std::int64_t d2, std::int64_t d3) {
  Mat4 m(ell);
  m.set(0, 0, d0);
  m.set(1, 1, d1);
  m.set(2, 2, d2);
  m.set(3, 3, d3);
  return m;
}

Mat4 Mat4::from_rows(std::uint32_t ell, const std::array<std::int64_t, 16>& entries) {
  Mat4 m(ell);
  for (int i = 0; i < 16; ++i) m.e_[i] = reduce(entries[i], ell);
  return m;
}

Mat4 Mat4::from_blocks(std::uint32_t ell, const std::array<std::int64_t, 4>& a, const std::array<std::int64_t, 4>& b,
                       const std::array<std::int64_t, 4>& c, const std::array<std::int64_t, 4>& d) {
  Mat4 m(ell);
  for (int r = 0; r < 2; ++r) {
    for (int s = 0; s < 2; ++s) {
      m.set(r, s, a[2 * r + s]);
      m.set(r, s + 2, b[2 * r + s]);
      m.set(r + 2, s, c[2 * r + s]);
      m.set(r + 2, s + 2, d[2 * r + s]);
    }
  }
  return m;
}

void Mat4::set(int r, int c, std::int64_t v) { e_[4 * r + c] = reduce(v, ell_); }

Mat4 Mat4::operator*(const Mat4& o) const {
  Mat4 out(ell_);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      std::uint64_t acc = 0;
      for (int k = 0; k < 4; ++k) acc += static_cast<std::uint64_t>(e_[4 * r + k]) * o.e_[4 * k + c];
      out.e_[4 * r + c] = static_cast<std::uint32_t>(acc % ell_);
    }
  }
  return out;
}

Mat4 Mat4::operator+(const Mat4& o) const {
  Mat4 out(ell_);
  for (int i = 0; i < 16; ++i) out.e_[i] = addmod(e_[i], o.e_[i], ell_);
  return out;
}

Mat4 Mat4::operator-(const Mat4& o) const {
  Mat4 out(ell_);
  for (int i = 0; i < 16; ++i) out.e_[i] = submod(e_[i], o.e_[i], ell_);
  return out;
}

Mat4 Mat4::scaled(std::uint32_t k) const {
  Mat4 out(ell_);
  for (int i = 0; i < 16; ++i) out.e_[i] = mulmod(e_[i], k % ell_, ell_);
  return out;
}

Mat4 Mat4::transpose() const {
  Mat4 out(ell_);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out.e_[4 * c + r] = e_[4 * r + c];
  }
  return out;
}

bool Mat4::is_zero() const noexcept {
  for (auto v : e_) {
    if (v != 0) return false;
  }
  return true;
}

std::uint32_t Mat4::trace() const noexcept {
  return static_cast<std::uint32_t>((std::uint64_t{e_[0]} + e_[5] + e_[10] + e_[15]) % ell_);
}

Mat4 standard_j(std::uint32_t ell) {
  return Mat4::from_blocks(ell, {0, 0, 0, 0}, {1, 0, 0, 1}, {-1, 0, 0, -1}, {0, 0, 0, 0});
}

std::uint32_t determinant(const Mat4& m) {
  static constexpr int kAll[4] = {0, 1, 2, 3};
  return principal_minor(m, kAll, 4);
}

std::optional<Mat4> inverse(const Mat4& m) {
  const std::uint32_t ell = m.ell();
  std::uint32_t a[4][8];
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      a[r][c] = m(r, c);
      a[r][c + 4] = r == c ? 1 : 0;
    }
  }
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r) {
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    for (int j = 0; j < 8; ++j) std::swap(a[piv][j], a[col][j]);
    const std::uint32_t inv = invmod(a[col][col], ell);
    for (int j = 0; j < 8; ++j) a[col][j] = mulmod(a[col][j], inv, ell);
    for (int r = 0; r < 4; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const std::uint32_t f = a[r][col];
      for (int j = 0; j < 8; ++j) a[r][j] = submod(a[r][j], mulmod(f, a[col][j], ell), ell);
    }
  }
  Mat4 out(ell);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out.set(r, c, a[r][c + 4]);
  }
  return out;
}

std::optional<std::uint32_t> multiplier(const Mat4& g) {
  const Mat4 j = standard_j(g.ell());
  const Mat4 form = g.transpose() * j * g;
  // form must equal m J: entry (0, 2) carries m.
  const std::uint32_t m = form(0, 2);
  if (m == 0) return std::nullopt;
  if (form != j.scaled(m)) return std::nullopt;
  return m;
}

std::array<std::uint32_t, 5> charpoly(const Mat4& g) {
  const std::uint32_t ell = g.ell();
  std::uint32_t s1 = g.trace();
  std::uint32_t s2 = 0;
  std::uint32_t s3 = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const int idx[2] = {i, j};
      s2 = addmod(s2, principal_minor(g, idx, 2), ell);
    }
  }
  for (int skip = 0; skip < 4; ++skip) {
    int idx[3];
    int n = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != skip) idx[n++] = i;
    }
    s3 = addmod(s3, principal_minor(g, idx, 3), ell);
  }
  const std::uint32_t s4 = determinant(g);
  // T^4 - s1 T^3 + s2 T^2 - s3 T + s4
  return {s4, submod(0, s3, ell), s2, submod(0, s1, ell), 1};
}

FpPoly charpoly_poly(const Mat4& g) {
  const auto c = charpoly(g);
  return FpPoly(g.ell(), {c[0], c[1], c[2], c[3], c[4]});
}

Mat4 eval_poly(const FpPoly& p, const Mat4& g) {
  Mat4 acc(g.ell());
  const Mat4 id = Mat4::identity(g.ell());
  for (int i = p.degree(); i >= 0; --i) acc = acc * g + id.scaled(static_cast<std::uint32_t>(p.coeff(i)));
  return acc;
}

std::size_t rank_mod(std::vector<std::vector<std::uint32_t>> rows, std::uint32_t ell) {
  if (rows.empty()) return 0;
  const std::size_t n = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const std::uint32_t inv = invmod(rows[rank][col], ell);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const std::uint32_t f = mulmod(rows[r][col], inv, ell);
      for (std::size_t j = col; j < n; ++j) rows[r][j] = submod(rows[r][j], mulmod(f, rows[rank][j], ell), ell);
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<std::uint32_t>> null_space(std::vector<std::vector<std::uint32_t>> rows, std::size_t n,
                                                   std::uint32_t ell) {
  // Reduced row echelon form, then one basis vector per free column.
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const std::uint32_t inv = invmod(rows[rank][col], ell);
    for (std::size_t j = 0; j < n; ++j) rows[rank][j] = mulmod(rows[rank][j], inv, ell);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const std::uint32_t f = rows[r][col];
      for (std::size_t j = 0; j < n; ++j) rows[r][j] = submod(rows[r][j], mulmod(f, rows[rank][j], ell), ell);
    }
    pivot_col.push_back(static_cast<int>(col));
    ++rank;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<std::uint32_t>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint32_t> v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = submod(0, rows[r][free], ell);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool is_cyclic(const Mat4& g) {
  std::vector<std::vector<std::uint32_t>> rows;
  Mat4 power = Mat4::identity(g.ell());
  for (int k = 0; k < 4; ++k) {
    rows.emplace_back(power.entries().begin(), power.entries().end());
    power = power * g;
  }
  return rank_mod(std::move(rows), g.ell()) == 4;
}

Packed pack(const Mat4& m) {
  if (m.ell() > kMaxPackedEll) throw Error(ErrorKind::InvalidArgument, "packing needs ell <= 16");
  Packed x = 0;
  for (int i = 0; i < 16; ++i) x |= static_cast<Packed>(m.entries()[i]) << (4 * i);
  return x;
}

Mat4 unpack(Packed x, std::uint32_t ell) {
  Mat4 m(ell);
  for (int i = 0; i < 16; ++i) m.set(i / 4, i % 4, static_cast<std::int64_t>((x >> (4 * i)) & 0xF));
  return m;
}

Packed mul_packed(Packed x, Packed y, std::uint32_t ell) {
  std::uint32_t a[16];
  std::uint32_t b[16];
  for (int i = 0; i < 16; ++i) {
    a[i] = static_cast<std::uint32_t>((x >> (4 * i)) & 0xF);
    b[i] = static_cast<std::uint32_t>((y >> (4 * i)) & 0xF);
  }
  Packed out = 0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const std::uint32_t acc = a[4 * r] * b[c] + a[4 * r + 1] * b[4 + c] + a[4 * r + 2] * b[8 + c] + a[4 * r + 3] * b[12 + c];
      out |= static_cast<Packed>(acc % ell) << (4 * (4 * r + c));
    }
  }
  return out;
}

Packed scale_lower_rows(Packed x, std::uint32_t s, std::uint32_t ell) {
  Packed out = x & 0xFFFF'FFFFULL;
  for (int i = 8; i < 16; ++i) {
    const auto v = static_cast<std::uint32_t>((x >> (4 * i)) & 0xF);
    out |= static_cast<Packed>((v * s) % ell) << (4 * i);
  }
  return out;
}

}  // namespace weilmass::gsp4
