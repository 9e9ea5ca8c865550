#pragma once

#include <array>
#include <vector>

#include "dirac/scalar_function.hpp"

namespace dirac {

/// f(x) * g(t)
struct SeparableTerm {
  ScalarFunction f;
  ScalarFunction g;
};

/// Volterra kernel M(x, t) on the triangle 0 <= t <= x <= 1. Each entry is a
/// finite sum of separable products.
class KernelFunction {
 public:
  KernelFunction() = default;

  /// Appends f(x) g(t) to entry (row, col), both 0-based.
  KernelFunction& add(int row, int col, ScalarFunction f, ScalarFunction g);

  const std::vector<SeparableTerm>& entry(int row, int col) const { return entries_[index(row, col)]; }
  Complex operator()(int row, int col, double x, double t) const;

  bool is_zero() const;
  bool is_smooth() const;
  std::size_t term_count() const;

 private:
  static std::size_t index(int row, int col);

  std::array<std::vector<SeparableTerm>, 4> entries_;
};

/// Coefficients of (1/i) B y' + Q(x) y + int_0^x M(x,t) y(t) dt = lambda y
/// with B = diag(1/a, 1/b) and Q = [[0, q1], [q2, 0]].
struct SystemSpec {
  double a = -1.0;
  double b = 1.0;
  ScalarFunction q1;
  ScalarFunction q2;
  KernelFunction kernel;

  /// Q == 0 and M == 0.
  bool is_free() const { return q1.is_zero() && q2.is_zero() && kernel.is_zero(); }
};

struct SpecReport {
  /// q1, q2 (and the kernel) consist of differentiable terms only.
  bool smooth = true;
  /// max |M_ij(x, t)| sampled on a lattice of the triangle.
  double kernel_bound = 0.0;
};

/// Checks a < 0 < b and finiteness; samples the kernel on the triangle.
/// Throws SpecError on violation.
SpecReport validate_spec(const SystemSpec& spec, int lattice = 65);

}  // namespace dirac
