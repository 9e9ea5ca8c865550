#include "dirac/system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dirac {

std::size_t KernelFunction::index(int row, int col) {
  if (row < 0 || row > 1 || col < 0 || col > 1) throw SpecError("kernel entry index out of range");
  return static_cast<std::size_t>(2 * row + col);
}

KernelFunction& KernelFunction::add(int row, int col, ScalarFunction f, ScalarFunction g) {
  entries_[index(row, col)].push_back(SeparableTerm{std::move(f), std::move(g)});
  return *this;
}

Complex KernelFunction::operator()(int row, int col, double x, double t) const {
  Complex sum{0.0};
  for (const auto& term : entries_[index(row, col)]) sum += term.f(x) * term.g(t);
  return sum;
}

bool KernelFunction::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& terms) {
    return std::all_of(terms.begin(), terms.end(),
                       [](const SeparableTerm& t) { return t.f.is_zero() || t.g.is_zero(); });
  });
}

bool KernelFunction::is_smooth() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& terms) {
    return std::all_of(terms.begin(), terms.end(),
                       [](const SeparableTerm& t) { return t.f.is_smooth() && t.g.is_smooth(); });
  });
}

std::size_t KernelFunction::term_count() const {
  std::size_t n = 0;
  for (const auto& terms : entries_) n += terms.size();
  return n;
}

SpecReport validate_spec(const SystemSpec& spec, int lattice) {
  if (!std::isfinite(spec.a) || !std::isfinite(spec.b)) throw SpecError("a and b must be finite");
  if (spec.a >= 0.0) throw SpecError("a must be negative");
  if (spec.b <= 0.0) throw SpecError("b must be positive");

  SpecReport report;
  report.smooth = spec.q1.is_smooth() && spec.q2.is_smooth() && spec.kernel.is_smooth();

  for (int i = 0; i < lattice; ++i) {
    const double x = static_cast<double>(i) / (lattice - 1);
    require_finite(spec.q1(x), "q1(x)");
    require_finite(spec.q2(x), "q2(x)");
    for (int j = 0; j <= i; ++j) {
      const double t = static_cast<double>(j) / (lattice - 1);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          const Complex m = spec.kernel(r, c, x, t);
          require_finite(m, "kernel M" + std::to_string(r + 1) + std::to_string(c + 1));
          report.kernel_bound = std::max(report.kernel_bound, std::abs(m));
        }
    }
  }
  return report;
}

}  // namespace dirac
