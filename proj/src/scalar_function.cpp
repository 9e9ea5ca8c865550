#include "dirac/scalar_function.hpp"

#include <algorithm>
#include <cmath>

namespace dirac {

Complex Term::operator()(double x) const {
  switch (kind) {
    case Kind::Monomial:
      return parameter == 0.0 ? coefficient : coefficient * std::pow(x, parameter);
    case Kind::Cos:
      return coefficient * std::cos(parameter * x);
    case Kind::Sin:
      return coefficient * std::sin(parameter * x);
    case Kind::Step:
      return x >= parameter ? coefficient : Complex(0.0);
  }
  return 0.0;
}

bool Term::is_smooth() const {
  if (coefficient == Complex(0.0)) return true;
  switch (kind) {
    case Kind::Monomial:
      return parameter == 0.0 || parameter >= 1.0;
    case Kind::Cos:
    case Kind::Sin:
      return true;
    case Kind::Step:
      return parameter <= 0.0 || parameter > 1.0;
  }
  return false;
}

ScalarFunction::ScalarFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    require_finite(t.coefficient, "term coefficient");
    if (!std::isfinite(t.parameter)) throw SpecError("term parameter must be finite");
    if (t.kind == Term::Kind::Monomial && t.parameter < 0.0)
      throw SpecError("monomial exponent must be nonnegative");
  }
}

ScalarFunction ScalarFunction::constant(Complex c) { return ScalarFunction({Term{Term::Kind::Monomial, c, 0.0}}); }
ScalarFunction ScalarFunction::monomial(Complex c, double power) {
  return ScalarFunction({Term{Term::Kind::Monomial, c, power}});
}
ScalarFunction ScalarFunction::cosine(Complex c, double frequency) {
  return ScalarFunction({Term{Term::Kind::Cos, c, frequency}});
}
ScalarFunction ScalarFunction::sine(Complex c, double frequency) {
  return ScalarFunction({Term{Term::Kind::Sin, c, frequency}});
}
ScalarFunction ScalarFunction::step(Complex c, double at) { return ScalarFunction({Term{Term::Kind::Step, c, at}}); }

Complex ScalarFunction::operator()(double x) const {
  Complex sum{0.0};
  for (const auto& t : terms_) sum += t(x);
  return sum;
}

bool ScalarFunction::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coefficient == Complex(0.0); });
}

bool ScalarFunction::is_smooth() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.is_smooth(); });
}

ScalarFunction operator+(ScalarFunction a, const ScalarFunction& b) {
  a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
  return a;
}

}  // namespace dirac
