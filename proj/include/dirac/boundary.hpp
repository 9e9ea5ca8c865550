#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "dirac/polynomial.hpp"

namespace dirac {

/// Linear conditions
///   P11 y1(0) + P12 y2(0) + P13 y1(1) + P14 y2(1) = 0
///   P21 y1(0) + P22 y2(0) + P23 y1(1) + P24 y2(1) = 0
/// Stored 0-based: rows[r][c] is P_{r+1, c+1}.
struct LinearBC {
  std::array<std::array<ComplexPolynomial, 4>, 2> rows;

  /// 1-based accessor matching the P_ij naming.
  const ComplexPolynomial& P(int i, int j) const { return rows.at(i - 1).at(j - 1); }
  Degree max_degree() const;
};

/// Quadratic conditions in the products (column order)
///   y1(0)^2, y2(0)^2, y1(1/2)^2, y2(1/2)^2, y1(0)y2(0), y1(0)y1(1/2),
///   y1(0)y2(1/2), y2(0)y1(1/2), y2(0)y2(1/2), y1(1/2)y2(1/2).
/// rows[r][c] is P_{r+1, c}.
struct QuadraticBC {
  std::array<std::array<ComplexPolynomial, 10>, 2> rows;

  const ComplexPolynomial& P(int i, int j) const { return rows.at(i - 1).at(j); }
  Degree max_degree() const;
};

/// Separated conditions
///   p11 y1(0) + p12 y2(0) = 0
///   p21 y1(1) + p22 y2(1) = 0
/// with deg p11 = deg p12 = N0, deg p21 = deg p22 = N1, both pairs coprime.
class SeparatedBC {
 public:
  /// Validates degrees, coprimality and nonzero leading coefficients.
  static SeparatedBC make(ComplexPolynomial p11, ComplexPolynomial p12, ComplexPolynomial p21,
                          ComplexPolynomial p22);

  const ComplexPolynomial& p11() const { return p11_; }
  const ComplexPolynomial& p12() const { return p12_; }
  const ComplexPolynomial& p21() const { return p21_; }
  const ComplexPolynomial& p22() const { return p22_; }

  int n0() const { return p11_.degree().value(); }
  int n1() const { return p21_.degree().value(); }
  Complex c11() const { return p11_.leading(); }
  Complex c12() const { return p12_.leading(); }
  Complex c21() const { return p21_.leading(); }
  Complex c22() const { return p22_.leading(); }

  /// Rows [p11, p12, 0, 0] and [0, 0, p21, p22].
  LinearBC to_linear() const;
  /// Inverse of to_linear(); nullopt when the zero pattern does not match
  /// or the separated hypotheses fail.
  static std::optional<SeparatedBC> from_linear(const LinearBC& bc);

 private:
  SeparatedBC(ComplexPolynomial p11, ComplexPolynomial p12, ComplexPolynomial p21, ComplexPolynomial p22)
      : p11_(std::move(p11)), p12_(std::move(p12)), p21_(std::move(p21)), p22_(std::move(p22)) {}

  ComplexPolynomial p11_, p12_, p21_, p22_;
};

using BoundarySpec = std::variant<LinearBC, QuadraticBC, SeparatedBC>;

/// All 2x2 column minors J_ij = P_{1i} P_{2j} - P_{1j} P_{2i} of a 2xC
/// polynomial matrix, indexed 0-based by column.
template <std::size_t C>
std::vector<ComplexPolynomial> column_minors(const std::array<std::array<ComplexPolynomial, C>, 2>& rows) {
  std::vector<ComplexPolynomial> out;
  for (std::size_t i = 0; i < C; ++i)
    for (std::size_t j = i + 1; j < C; ++j)
      out.push_back(cross_difference(rows[0][i], rows[1][j], rows[0][j], rows[1][i]));
  return out;
}

struct RankReport {
  bool full_rank = true;
  /// A lambda where every 2x2 minor vanishes (set when full_rank is false).
  std::optional<Complex> witness;
};

/// Rank-2 test for all lambda: rank drops exactly at common roots of all
/// 2x2 minors (identically rank-deficient when every minor is zero).
RankReport check_rank2(const LinearBC& bc);
RankReport check_rank2(const QuadraticBC& bc);

}  // namespace dirac
