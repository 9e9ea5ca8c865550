#pragma once

#include <algorithm>
#include <vector>

#include "dirac/polynomial.hpp"

namespace dirac {

/// Truncated Taylor series sum_{k<=order} c_k eps^k around a fixed base
/// point. Arithmetic truncates to the smaller order of the operands, so a
/// Jet of order K carries (1/k!) d^k/dlambda^k for k = 0..K exactly.
template <typename Scalar>
class Jet {
 public:
  Jet() : c_(1, Scalar(0)) {}
  explicit Jet(int order) : c_(static_cast<std::size_t>(order) + 1, Scalar(0)) {}
  Jet(int order, Scalar value) : Jet(order) { c_[0] = value; }
  explicit Jet(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(Scalar(0));
  }

  /// The series of the independent variable lambda0 + eps.
  static Jet variable(Scalar base, int order) {
    Jet j(order, base);
    if (order >= 1) j.c_[1] = Scalar(1);
    return j;
  }

  /// p(lambda0 + eps) truncated at `order`.
  static Jet of(const Polynomial<Scalar>& p, Scalar base, int order) { return Jet(p.taylor(base, order)); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  Scalar value() const { return c_[0]; }
  Scalar operator[](int k) const { return k <= order() ? c_[static_cast<std::size_t>(k)] : Scalar(0); }
  Scalar& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  const std::vector<Scalar>& coefficients() const { return c_; }

  Jet truncated(int order) const {
    std::vector<Scalar> c(c_.begin(), c_.begin() + std::min<std::ptrdiff_t>(order + 1, c_.size()));
    return Jet(std::move(c));
  }

  Jet& operator+=(const Jet& o) {
    resize_min(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    resize_min(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(Scalar s) {
    for (auto& c : c_) c *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= Scalar(-1); }
  friend Jet operator*(Jet a, Scalar s) { return a *= s; }
  friend Jet operator*(Scalar s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, Scalar s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    const int n = std::min(a.order(), b.order());
    Jet out(n);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) out.c_[static_cast<std::size_t>(i + j)] += a[i] * b[j];
    return out;
  }

 private:
  void resize_min(const Jet& o) {
    if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  }

  std::vector<Scalar> c_;
};

using ComplexJet = Jet<Complex>;

}  // namespace dirac
