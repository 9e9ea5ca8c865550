#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "dirac/charfn.hpp"
#include "dirac/spectrum.hpp"

namespace dirac {

/// Eigenfunction (order 0) or associate function of an eigenvalue: the
/// Taylor coefficient (1/k!) d^k/dlambda^k omega_branch(x; lambda) at the
/// eigenvalue.
struct RootFunction {
  SpectralPoint eigenvalue;
  int branch = 1;
  int order = 0;
  Samples samples;
  double l2_norm = 0.0;
  /// Magnitude of the terms the samples were assembled from.
  double scale = 0.0;
};

/// Taylor coefficients u_0..u_order of omega_branch(x; lambda) on the grid.
///   linear / separated: omega_1 = Q12 phi0 - Q11 psi0, omega_2 = Q22 phi0 - Q21 psi0
///   quadratic:          omega_1 = D13 phi0 - D12 psi0, omega_2 = D23 phi0 - D13 psi0
/// Needs order <= 4. `scales`, when given, receives a magnitude per coefficient.
std::vector<Samples> omega_chain(const CharContext& ctx, Complex lambda, int branch, int order,
                                 std::vector<double>* scales = nullptr);

/// Root functions of a linear (or separated) problem at pt, filtered to a
/// linearly independent set ordered by (order, branch).
std::vector<RootFunction> build_root_functions_linear(const CharContext& ctx, const SpectralPoint& pt);
std::vector<RootFunction> build_root_functions_quadratic(const CharContext& ctx, const SpectralPoint& pt);
/// Dispatches on the boundary type.
std::vector<RootFunction> build_root_functions(const CharContext& ctx, const SpectralPoint& pt);

/// Both boundary forms applied to y: nodes 0, 1 (linear, separated) or 0, 1/2 (quadratic).
std::pair<Complex, Complex> bc_residual(const BoundarySpec& bc, const Samples& y, Complex lambda);
/// Taylor coefficient k of the boundary forms applied to the chain
/// (chain[m] the m-th coefficient, lambda-dependent P expanded as well).
std::pair<Complex, Complex> bc_residual_chain(const BoundarySpec& bc, const std::vector<Samples>& chain,
                                              Complex lambda, int k);

/// max_x |(1/i) B u' + Q u + int_0^x M u - lambda u - previous| by direct
/// substitution (fourth-order differences and quadrature). Pass an empty
/// `previous` for an eigenfunction.
double chain_residual(const SystemSpec& spec, Complex lambda, const Samples& u, const Samples& previous);

/// L2([0,1]) + L2([0,1]) norm by composite Simpson.
double l2_norm(const Samples& y);
Complex inner_product(const Samples& f, const Samples& g);
/// Throws NumericalError on a zero-norm input.
RootFunction normalize(const RootFunction& rf);

/// CSV columns x, Re y1, Im y1, Re y2, Im y2.
void write_root_function_csv(std::ostream& out, const RootFunction& rf);

}  // namespace dirac
