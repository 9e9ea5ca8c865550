#include "dirac/polynomial.hpp"

#include <limits>

#include <Eigen/Eigenvalues>

namespace dirac {

std::vector<Complex> roots(const ComplexPolynomial& p) {
  if (p.degree() < Degree(1)) return {};
  const Eigen::Index n = p.size() - 1;
  // Strip zero roots exactly; the companion matrix handles the rest.
  Eigen::Index shift = 0;
  while (shift < n && p.coefficient(shift) == Complex(0.0)) ++shift;
  std::vector<Complex> out(static_cast<std::size_t>(shift), Complex(0.0));
  const Eigen::Index m = n - shift;
  if (m == 0) return out;
  if (m == 1) {
    out.push_back(-p.coefficient(shift) / p.coefficient(shift + 1));
    return out;
  }
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
  const Complex lead = p.leading();
  for (Eigen::Index i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) companion(i, m - 1) = -p.coefficient(shift + i) / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalError("companion eigen-solve failed");
  for (Eigen::Index i = 0; i < m; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

Complex resultant(const ComplexPolynomial& p, const ComplexPolynomial& q) {
  if (p.is_zero() || q.is_zero()) return 0.0;
  const Eigen::Index m = p.size() - 1;
  const Eigen::Index n = q.size() - 1;
  if (m == 0 && n == 0) return 1.0;
  if (m == 0) return std::pow(p.leading(), static_cast<int>(n));
  if (n == 0) return std::pow(q.leading(), static_cast<int>(m));
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m + n, m + n);
  // Rows hold descending coefficients, shifted.
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index k = 0; k <= m; ++k) s(r, r + k) = p.coefficient(m - k);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index k = 0; k <= n; ++k) s(n + r, r + k) = q.coefficient(n - k);
  return s.partialPivLu().determinant();
}

double normalized_resultant(const ComplexPolynomial& p, const ComplexPolynomial& q) {
  if (p.is_zero() || q.is_zero()) return 0.0;
  const int m = p.degree().value();
  const int n = q.degree().value();
  const double np = p.coefficients().norm();
  const double nq = q.coefficients().norm();
  return std::abs(resultant(p, q)) / (std::pow(np, n) * std::pow(nq, m));
}

double relative_residual(const ComplexPolynomial& p, Complex x) {
  if (p.is_zero()) return 0.0;
  double scale = 0.0;
  double power = 1.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    scale += std::abs(p.coefficient(k)) * power;
    power *= std::abs(x);
  }
  return scale == 0.0 ? 0.0 : std::abs(p(x)) / scale;
}

namespace {

const ComplexPolynomial* lowest_degree_nonzero(std::span<const ComplexPolynomial> polys) {
  const ComplexPolynomial* best = nullptr;
  for (const auto& p : polys)
    if (!p.is_zero() && (best == nullptr || p.degree() < best->degree())) best = &p;
  return best;
}

// Number of leading Taylor coefficients of p at x that vanish relative to
// the coefficient scale of p.
int root_multiplicity(const ComplexPolynomial& p, Complex x, double tol) {
  if (p.is_zero()) return std::numeric_limits<int>::max();
  const int deg = p.degree().value();
  const auto t = p.taylor(x, deg);
  double scale = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) scale += std::abs(p.coefficient(k)) * std::pow(std::abs(x) + 1.0, k);
  int m = 0;
  // Multiple roots are only located to ~tol^{1/m}; loosen the threshold
  // geometrically along the chain.
  double threshold = tol;
  while (m <= deg && std::abs(t[static_cast<std::size_t>(m)]) <= threshold * scale) {
    ++m;
    threshold = std::sqrt(threshold);
  }
  return m;
}

}  // namespace

std::vector<Complex> common_roots(std::span<const ComplexPolynomial> polys, double tol, double cluster_tol) {
  const ComplexPolynomial* base = lowest_degree_nonzero(polys);
  if (base == nullptr || base->degree() < Degree(1)) return {};
  std::vector<Complex> out;
  for (const Complex r : roots(*base)) {
    bool shared = true;
    for (const auto& p : polys) {
      if (p.is_zero()) continue;
      if (relative_residual(p, r) > tol) {
        shared = false;
        break;
      }
    }
    if (!shared) continue;
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](Complex s) {
      return std::abs(s - r) <= cluster_tol * std::max(1.0, std::abs(r));
    });
    if (!duplicate) out.push_back(r);
  }
  return out;
}

ComplexPolynomial gcd(std::span<const ComplexPolynomial> polys, double tol) {
  if (all_zero(polys)) return ComplexPolynomial();
  ComplexPolynomial g = ComplexPolynomial::constant(1.0);
  const ComplexPolynomial* base = lowest_degree_nonzero(polys);
  // Cluster roots of the base generously so multiple roots collapse, then
  // recover multiplicities from Taylor coefficients.
  for (const Complex r : common_roots(polys, tol, 1e-4)) {
    int mult = std::numeric_limits<int>::max();
    for (const auto& p : polys) mult = std::min(mult, root_multiplicity(p, r, tol));
    mult = std::max(1, std::min(mult, base->degree().value()));
    for (int k = 0; k < mult; ++k) g = g * ComplexPolynomial({-r, 1.0});
  }
  return g;
}

}  // namespace dirac
