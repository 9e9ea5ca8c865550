#pragma once

#include <vector>

#include "dirac/core.hpp"

namespace dirac {

/// One closed-form term of a ScalarFunction.
///   monomial: c * x^p          (p >= 0)
///   cos:      c * cos(p * x)
///   sin:      c * sin(p * x)
///   step:     c * [x >= p]     (piecewise; not differentiable)
struct Term {
  enum class Kind { Monomial, Cos, Sin, Step };

  Kind kind = Kind::Monomial;
  Complex coefficient{0.0};
  double parameter = 0.0;

  Complex operator()(double x) const;
  bool is_smooth() const;
};

/// Finite sum of closed-form terms, evaluable anywhere on [0, 1].
class ScalarFunction {
 public:
  ScalarFunction() = default;
  explicit ScalarFunction(std::vector<Term> terms);

  static ScalarFunction constant(Complex c);
  static ScalarFunction monomial(Complex c, double power);
  static ScalarFunction cosine(Complex c, double frequency);
  static ScalarFunction sine(Complex c, double frequency);
  static ScalarFunction step(Complex c, double at);

  Complex operator()(double x) const;

  const std::vector<Term>& terms() const { return terms_; }
  /// True when no term carries a nonzero coefficient.
  bool is_zero() const;
  /// True when every term is continuously differentiable on [0, 1].
  bool is_smooth() const;

  friend ScalarFunction operator+(ScalarFunction a, const ScalarFunction& b);

 private:
  std::vector<Term> terms_;
};

}  // namespace dirac
