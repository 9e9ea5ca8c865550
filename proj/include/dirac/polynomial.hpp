#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dirac/core.hpp"

namespace dirac {

/// Polynomial degree with a distinct negative-infinity value for the zero
/// polynomial. Ordered so that -inf compares below every finite degree and
/// equal only to itself.
class Degree {
 public:
  constexpr explicit Degree(int value) : finite_(true), value_(value) {}

  static constexpr Degree negative_infinity() { return Degree(); }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_negative_infinity() const { return !finite_; }

  int value() const {
    if (!finite_) throw std::logic_error("degree of the zero polynomial has no finite value");
    return value_;
  }

  constexpr std::strong_ordering operator<=>(const Degree& other) const {
    if (!finite_ || !other.finite_) return finite_ <=> other.finite_;
    return value_ <=> other.value_;
  }
  constexpr bool operator==(const Degree& other) const { return (*this <=> other) == 0; }

  friend constexpr Degree operator+(Degree lhs, Degree rhs) {
    if (!lhs.finite_ || !rhs.finite_) return negative_infinity();
    return Degree(lhs.value_ + rhs.value_);
  }

  std::string to_string() const { return finite_ ? std::to_string(value_) : std::string("-inf"); }

 private:
  constexpr Degree() : finite_(false), value_(0) {}

  bool finite_;
  int value_;
};

inline Degree max(Degree a, Degree b) { return a < b ? b : a; }

/// Dense univariate polynomial with ascending coefficients. Trailing zero
/// coefficients are always trimmed; the zero polynomial has no coefficients.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() = default;
  Polynomial(std::initializer_list<Scalar> coeffs) : coeffs_(static_cast<Eigen::Index>(coeffs.size())) {
    Eigen::Index i = 0;
    for (const auto& c : coeffs) coeffs_(i++) = c;
    trim(0.0);
  }
  explicit Polynomial(Coefficients coeffs) : coeffs_(std::move(coeffs)) { trim(0.0); }
  explicit Polynomial(const std::vector<Scalar>& coeffs)
      : coeffs_(Eigen::Map<const Coefficients>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()))) {
    trim(0.0);
  }

  static Polynomial constant(Scalar c) { return Polynomial({c}); }
  /// The monomial lambda.
  static Polynomial identity() { return Polynomial({Scalar(0), Scalar(1)}); }

  const Coefficients& coefficients() const { return coeffs_; }
  Eigen::Index size() const { return coeffs_.size(); }
  Scalar coefficient(Eigen::Index k) const { return k < coeffs_.size() ? coeffs_(k) : Scalar(0); }

  bool is_zero() const { return coeffs_.size() == 0; }
  Degree degree() const {
    return is_zero() ? Degree::negative_infinity() : Degree(static_cast<int>(coeffs_.size()) - 1);
  }
  Scalar leading() const { return is_zero() ? Scalar(0) : coeffs_(coeffs_.size() - 1); }

  /// Largest coefficient magnitude (0 for the zero polynomial).
  double norm_inf() const { return is_zero() ? 0.0 : coeffs_.cwiseAbs().maxCoeff(); }

  /// Drops trailing coefficients with |c| <= tol.
  Polynomial& trim(double tol) {
    Eigen::Index n = coeffs_.size();
    while (n > 0 && std::abs(coeffs_(n - 1)) <= tol) --n;
    coeffs_.conservativeResize(n);
    return *this;
  }
  Polynomial trimmed(double tol) const {
    Polynomial p = *this;
    return p.trim(tol);
  }

  /// Horner evaluation.
  Scalar operator()(const Scalar& x) const {
    Scalar acc(0);
    for (Eigen::Index k = coeffs_.size() - 1; k >= 0; --k) acc = acc * x + coeffs_(k);
    return acc;
  }

  /// Term-by-term evaluation sum c_k x^k (reference path for Horner).
  Scalar evaluate_termwise(const Scalar& x) const {
    Scalar sum(0);
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) sum += coeffs_(k) * std::pow(x, static_cast<int>(k));
    return sum;
  }

  /// Taylor coefficients p^{(k)}(x0)/k! for k = 0..order via repeated
  /// synthetic division.
  std::vector<Scalar> taylor(const Scalar& x0, int order) const {
    std::vector<Scalar> out(static_cast<std::size_t>(order) + 1, Scalar(0));
    std::vector<Scalar> work(coeffs_.data(), coeffs_.data() + coeffs_.size());
    for (int k = 0; k <= order && !work.empty(); ++k) {
      // Divide work by (x - x0): remainder is the k-th Taylor coefficient.
      const std::size_t n = work.size();
      std::vector<Scalar> quotient(n > 0 ? n - 1 : 0);
      Scalar acc(0);
      for (std::size_t i = n; i-- > 0;) {
        acc = acc * x0 + work[i];
        if (i > 0) quotient[i - 1] = acc;
      }
      out[static_cast<std::size_t>(k)] = acc;
      work = std::move(quotient);
    }
    return out;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    Coefficients d(coeffs_.size() - 1);
    for (Eigen::Index k = 1; k < coeffs_.size(); ++k) d(k - 1) = coeffs_(k) * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  Polynomial operator-() const { return Polynomial(Coefficients(-coeffs_)); }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    const Eigen::Index n = std::max(p.size(), q.size());
    Coefficients c = Coefficients::Zero(n);
    c.head(p.size()) += p.coeffs_;
    c.head(q.size()) += q.coeffs_;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-q); }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return Polynomial();
    Coefficients c = Coefficients::Zero(p.size() + q.size() - 1);
    for (Eigen::Index i = 0; i < p.size(); ++i)
      for (Eigen::Index j = 0; j < q.size(); ++j) c(i + j) += p.coeffs_(i) * q.coeffs_(j);
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Scalar& s, const Polynomial& p) { return Polynomial(Coefficients(s * p.coeffs_)); }

  friend bool operator==(const Polynomial& p, const Polynomial& q) {
    return p.size() == q.size() && (p.size() == 0 || p.coeffs_ == q.coeffs_);
  }

  bool approx_equal(const Polynomial& other, double rel_tol) const {
    const double scale = std::max({1.0, norm_inf(), other.norm_inf()});
    const Eigen::Index n = std::max(size(), other.size());
    for (Eigen::Index k = 0; k < n; ++k)
      if (std::abs(coefficient(k) - other.coefficient(k)) > rel_tol * scale) return false;
    return true;
  }

 private:
  Coefficients coeffs_;
};

using ComplexPolynomial = Polynomial<Complex>;

/// p*s - q*r with cancellation noise trimmed relative to the product scale.
template <typename Scalar>
Polynomial<Scalar> cross_difference(const Polynomial<Scalar>& p, const Polynomial<Scalar>& s,
                                    const Polynomial<Scalar>& q, const Polynomial<Scalar>& r) {
  const auto left = p * s;
  const auto right = q * r;
  const double scale = std::max(left.norm_inf(), right.norm_inf());
  return (left - right).trimmed(1e-14 * scale);
}

/// Roots of a nonconstant polynomial via eigenvalues of the companion matrix.
std::vector<Complex> roots(const ComplexPolynomial& p);

/// Determinant of the Sylvester matrix of p and q.
Complex resultant(const ComplexPolynomial& p, const ComplexPolynomial& q);

/// Resultant scaled by ||p||^deg q * ||q||^deg p, so that coprimality can be
/// judged against an absolute threshold.
double normalized_resultant(const ComplexPolynomial& p, const ComplexPolynomial& q);

/// |p(x)| relative to sum |c_k| |x|^k; small values mean x is a root.
double relative_residual(const ComplexPolynomial& p, Complex x);

/// Common roots of all given polynomials (zero polynomials impose no
/// constraint). Candidates come from the lowest-degree nonzero member and
/// are kept when every member vanishes there to `tol` relative residual.
/// Candidates closer than `cluster_tol` are merged. An empty vector is
/// returned both for "no common root" and "all polynomials zero"; callers
/// distinguish the latter with all_zero().
std::vector<Complex> common_roots(std::span<const ComplexPolynomial> polys, double tol = 1e-8,
                                  double cluster_tol = 1e-8);

/// Monic greatest common divisor assembled from common_roots (with
/// multiplicity taken as the minimum root multiplicity across members).
ComplexPolynomial gcd(std::span<const ComplexPolynomial> polys, double tol = 1e-8);

inline bool all_zero(std::span<const ComplexPolynomial> polys) {
  return std::all_of(polys.begin(), polys.end(), [](const auto& p) { return p.is_zero(); });
}

}  // namespace dirac
