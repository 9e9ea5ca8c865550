#include "dirac/grid.hpp"

#include <cmath>
#include <string>

namespace dirac {

int GridConfig::node_index(double x) const {
  const double pos = x * (n_points - 1);
  const double rounded = std::round(pos);
  if (x < 0.0 || x > 1.0 || std::abs(pos - rounded) > 1e-9 * (n_points - 1))
    throw SpecError("x = " + std::to_string(x) + " is not a grid node");
  return static_cast<int>(rounded);
}

void validate_grid(const GridConfig& grid) {
  if (grid.n_points < 33 || grid.n_points % 2 == 0) throw SpecError("n_points must be odd and at least 33");
  if (!(grid.newton_tol > 0.0)) throw SpecError("newton_tol must be positive");
  if (grid.contour_samples <= 0) throw SpecError("contour_samples must be positive");
}

Eigen::VectorXd quadrature_weights(int n_points, QuadRule rule, double length) {
  const double h = length / (n_points - 1);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n_points, h);
  if (rule == QuadRule::Simpson && n_points % 2 == 1) {
    for (int j = 1; j < n_points - 1; ++j) w(j) = (j % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    w(0) = w(n_points - 1) = h / 3.0;
  } else {
    w(0) = w(n_points - 1) = 0.5 * h;
  }
  return w;
}

}  // namespace dirac
