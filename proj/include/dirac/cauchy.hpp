#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "dirac/grid.hpp"
#include "dirac/system.hpp"

namespace dirac {

/// Row 0 is the first component, row 1 the second; one column per node.
using Samples = Eigen::Matrix<Complex, 2, Eigen::Dynamic>;

/// Magnitude beyond which integration aborts.
inline constexpr double kDynamicRangeLimit = 1e280;

/// phi_alpha, psi_alpha with phi_alpha(alpha) = (1, 0), psi_alpha(alpha) = (0, 1).
/// phi[k], psi[k] hold Taylor coefficients (1/k!) d^k/dlambda^k at lambda,
/// so phi[0], psi[0] are the solutions themselves.
struct FundamentalSolution {
  double alpha = 0.0;
  Complex lambda{0.0};
  GridConfig grid;
  int kmax = 0;
  std::vector<Samples> phi;
  std::vector<Samples> psi;
  /// W(x) = phi_1 psi_2 - psi_1 phi_2 at every node, propagated directly
  /// rather than formed from the samples.
  Eigen::VectorXcd wronskian;

  /// k-th lambda-derivative (k! times the stored Taylor coefficient).
  Samples dphi(int k) const;
  Samples dpsi(int k) const;

  /// Column j of the solution matrix [[phi1, psi1], [phi2, psi2]] at node j.
  Eigen::Matrix2cd matrix(int node, int k = 0) const;
};

/// Integrates (3) with the unit initial data at alpha (a grid node) and
/// lambda-derivative chains up to kmax <= 4. Throws NumericalError when the
/// solution exceeds kDynamicRangeLimit.
FundamentalSolution solve_fundamental(const SystemSpec& spec, double alpha, Complex lambda, const GridConfig& grid,
                                      int kmax = 0);

/// Same as solve_fundamental but never takes the closed-form path for
/// Q = M = 0 (reference path for tests).
FundamentalSolution solve_fundamental_numeric(const SystemSpec& spec, double alpha, Complex lambda,
                                              const GridConfig& grid, int kmax = 0);

/// Tracked Wronskian at the node x.
Complex wronskian(const FundamentalSolution& fs, double x);
/// det [[phi1, psi1], [phi2, psi2]] from the samples at x.
Complex wronskian_direct(const FundamentalSolution& fs, double x);

struct GrowthSample {
  Complex lambda{0.0};
  /// Per component (phi1, phi2, psi1, psi2) and side (0: x < alpha, 1: x > alpha):
  /// max |y - y_free| / max(|e^{ia lambda (x-alpha)}|, |e^{ib lambda (x-alpha)}|).
  std::array<std::array<double, 2>, 4> component{};
  double deviation = 0.0;
  double im_scaled = 0.0;   // |Im lambda| d
  double abs_scaled = 0.0;  // |lambda| d
};

struct GrowthReport {
  double alpha = 0.0;
  bool smooth = true;
  std::vector<GrowthSample> samples;
  /// Consecutive ratios of the scaled sequences.
  std::vector<double> im_ratios;
  std::vector<double> abs_ratios;
  double max_im_ratio = 0.0;
  double max_abs_ratio = 0.0;
};

/// Deviation of the fundamental solutions from the free exponentials along
/// a list of lambdas (normally a vertical ray with growing |Im lambda|).
GrowthReport validate_growth(const SystemSpec& spec, const GridConfig& grid, const std::vector<Complex>& lambdas,
                             double alpha);

/// CSV with columns x, Re/Im phi1, phi2, psi1, psi2.
void write_csv(std::ostream& out, const FundamentalSolution& fs);

}  // namespace dirac
