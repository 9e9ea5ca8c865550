#pragma once

#include <cmath>
#include <random>

#include <doctest.h>

#include "dirac/riesz.hpp"

namespace dirac::test {

inline std::mt19937& rng() {
  static std::mt19937 gen(20261015u);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline Complex random_complex(double re_span, double im_span) {
  return {uniform(-re_span, re_span), uniform(-im_span, im_span)};
}

inline ComplexPolynomial random_polynomial(int degree) {
  std::vector<Complex> c;
  for (int k = 0; k <= degree; ++k) c.push_back(random_complex(1.0, 1.0));
  if (std::abs(c.back()) < 0.1) c.back() += 1.0;
  return ComplexPolynomial(c);
}

inline double rel(Complex got, Complex want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

inline ComplexPolynomial cst(Complex c) { return ComplexPolynomial{c}; }

/// p11 = p12 = p21 = p22 = 1.
inline SeparatedBC all_ones() { return SeparatedBC::make(cst(1.0), cst(1.0), cst(1.0), cst(1.0)); }

/// (y1(0) + y2(0))^2 = 0 and (y1(1/2) + y2(1/2))^2 = 0.
inline QuadraticBC factored_square() {
  QuadraticBC q;
  q.rows[0][0] = cst(1.0);
  q.rows[0][1] = cst(1.0);
  q.rows[0][4] = cst(2.0);
  q.rows[1][2] = cst(1.0);
  q.rows[1][3] = cst(1.0);
  q.rows[1][9] = cst(2.0);
  return q;
}

/// q1 = sin(pi x), q2 = cos(2x) / 2, no kernel.
inline SystemSpec trig_potential() {
  SystemSpec s;
  s.q1 = ScalarFunction::sine(1.0, kPi);
  s.q2 = ScalarFunction::cosine(0.5, 2.0);
  return s;
}

inline SystemSpec constant_potential(Complex q) {
  SystemSpec s;
  s.q1 = ScalarFunction::constant(q);
  s.q2 = ScalarFunction::constant(q);
  return s;
}

/// Closed-form solution of the decoupled system: component 1 of phi_alpha
/// and component 2 of psi_alpha.
inline Complex free_phi(double a, Complex lambda, double x, double alpha) { return std::exp(kI * a * lambda * (x - alpha)); }
inline Complex free_psi(double b, Complex lambda, double x, double alpha) { return std::exp(kI * b * lambda * (x - alpha)); }

inline GridConfig grid(int n) {
  GridConfig g;
  g.n_points = n;
  return g;
}

}  // namespace dirac::test
