#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dirac {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Malformed input: violated structural assumptions, bad configuration.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const std::string& what) {
  if (!is_finite(z)) throw SpecError(what + " must be finite");
}

}  // namespace dirac
