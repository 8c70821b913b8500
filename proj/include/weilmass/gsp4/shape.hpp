#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weilmass/fppoly.hpp"
#include "weilmass/gsp4/matrix.hpp"
#include "weilmass/weil.hpp"

namespace weilmass::gsp4 {

enum class ShapeKind : std::uint8_t { Split, DQ_S, DQ_I, Quartic, QRL, DRL_S, DRL_I, RQ_1, RQ_2 };

inline constexpr ShapeKind kAllShapes[] = {ShapeKind::Split, ShapeKind::DQ_S,  ShapeKind::DQ_I,
                                           ShapeKind::Quartic, ShapeKind::QRL, ShapeKind::DRL_S,
                                           ShapeKind::DRL_I, ShapeKind::RQ_1,  ShapeKind::RQ_2};

/// Sign is meaningful only for DRL-S and RQ-2, whose cyclic elements with a fixed
/// characteristic polynomial split into two GSp4-classes.
enum class ShapeSign : std::uint8_t { NotApplicable, Plus, Minus };

struct ClassShape {
  ShapeKind kind = ShapeKind::Split;
  ShapeSign sign = ShapeSign::NotApplicable;
  friend bool operator==(const ClassShape&, const ClassShape&) = default;
};

bool has_two_classes(ShapeKind kind);
bool is_regular_semisimple(ShapeKind kind);

std::string to_string(ShapeKind kind);
std::string to_string(const ClassShape& shape);
ShapeKind shape_kind_from_string(const std::string& s);

/// Shape of the cyclic class with the given factored characteristic polynomial and multiplier m.
/// Throws ErrorKind::Validation ("pattern mismatch") when the pattern fits no shape.
ShapeKind classify_factorization(const std::vector<FpFactor>& factors, std::uint32_t m, std::uint32_t ell);

/// Shape of Frobenius at ell != p, read from f mod ell and q mod ell.
ClassShape frobenius_shape(const WeilPolynomial& w, std::uint32_t ell);

/// Kind of Frobenius at an odd ell dividing neither p nor disc(O_f), read from Legendre symbols
/// of delta_fplus and norm_term (and one square root) instead of a factorization.
/// Agrees with frobenius_shape; throws ErrorKind::Validation for a pattern matching no shape.
ShapeKind unramified_frobenius_kind(const WeilPolynomial& w, const WeilInvariants& inv, std::uint32_t ell);

/// #Z_{GSp4(F_ell)}(gamma) for gamma of the given shape.
BigInt centralizer_order_formula(ShapeKind kind, std::uint64_t ell);

enum class ElementStatus {
  Classified,
  NotSimilitude,
  /// Semisimple with a repeated eigenvalue: not regular, outside every shape.
  NonCyclicSemisimple,
  NonCyclicNonSemisimple,
  /// Cyclic, but the factorization pattern matches no shape.
  Irrelevant,
};

std::string to_string(ElementStatus status);

struct ElementShape {
  ElementStatus status = ElementStatus::Irrelevant;
  std::optional<ClassShape> shape;
};

/// Kind from the characteristic polynomial and multiplier; for DRL-S and RQ-2 the sign
/// is decided by GSp4-conjugacy against the pinned representatives.
ElementShape shape_of_element(const Mat4& g);

std::uint32_t smallest_nonsquare(std::uint32_t ell);

/// [[a, 0, 1, 0], [0, -a, 0, t], [0, 0, a, 0], [0, 0, 0, -a]] with t = 1 (Plus) or the
/// smallest nonsquare (Minus). Multiplier a^2.
Mat4 drl_s_representative(std::uint32_t ell, std::uint32_t a, ShapeSign sign);

/// Cyclic elements with characteristic polynomial (T^2 - m)^2 and multiplier m, m a nonsquare,
/// of the form [[A, A S/m], [0, A^T]] with A = [[0, m], [1, 0]] and S symmetric invertible.
/// Plus takes S = I, or the first cyclic S in a fixed order when m = -1 (S = I is then not
/// cyclic); Minus is the first cyclic S in that order not conjugate to Plus.
Mat4 rq2_representative(std::uint32_t ell, std::uint32_t m, ShapeSign sign);

/// Some X in GSp4(F_ell) with X * from = to * X, if one exists.
std::optional<Mat4> find_similitude_conjugator(const Mat4& from, const Mat4& to);

/// [[z1, 0, z3, 0], [0, z2, 0, z4], [0, 0, z1, 0], [0, 0, 0, z2 x]]; satisfies
/// Z * drl_s(-) = drl_s(+) * Z for every z when x is the nonsquare used in drl_s(-).
Mat4 drl_s_intertwiner(std::uint32_t ell, std::uint32_t x, std::int64_t z1, std::int64_t z2, std::int64_t z3,
                       std::int64_t z4);

}  // namespace weilmass::gsp4
