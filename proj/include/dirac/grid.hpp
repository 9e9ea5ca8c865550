#pragma once

#include <Eigen/Dense>

#include "dirac/core.hpp"

namespace dirac {

enum class QuadRule { Trapezoid, Simpson };

struct GridConfig {
  int n_points = 513;
  QuadRule quad_rule = QuadRule::Simpson;
  double newton_tol = 1e-12;
  int contour_samples = 128;

  double step() const { return 1.0 / (n_points - 1); }
  double node(int j) const { return static_cast<double>(j) / (n_points - 1); }
  int midpoint_node() const { return (n_points - 1) / 2; }

  /// Index of the node at x; throws when x is not a grid node.
  int node_index(double x) const;

  Eigen::VectorXd nodes() const { return Eigen::VectorXd::LinSpaced(n_points, 0.0, 1.0); }
};

/// Throws SpecError unless n_points >= 33 and odd, newton_tol > 0 and
/// contour_samples > 0.
void validate_grid(const GridConfig& grid);

/// Composite quadrature weights on an n-point uniform grid of [0, length].
Eigen::VectorXd quadrature_weights(int n_points, QuadRule rule, double length = 1.0);

inline Eigen::VectorXd quadrature_weights(const GridConfig& grid) {
  return quadrature_weights(grid.n_points, grid.quad_rule);
}

}  // namespace dirac
