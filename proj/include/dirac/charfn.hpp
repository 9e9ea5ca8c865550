#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dirac/boundary.hpp"
#include "dirac/cauchy.hpp"
#include "dirac/jet.hpp"

namespace dirac {

/// 2x2 column minors J_ij of a boundary matrix, antisymmetric in (i, j).
/// Indices follow the P_ij naming: 1..4 for LinearBC, 0..9 for QuadraticBC.
class MinorTable {
 public:
  MinorTable(int first_index, int columns);

  const ComplexPolynomial& operator()(int i, int j) const { return j_[slot(i, j)]; }
  void set(int i, int j, const ComplexPolynomial& p);

  int first_index() const { return first_; }
  int columns() const { return columns_; }

 private:
  std::size_t slot(int i, int j) const;

  int first_;
  int columns_;
  std::vector<ComplexPolynomial> j_;
};

MinorTable minors(const LinearBC& bc);
MinorTable minors(const QuadraticBC& bc);

struct ConditionReport {
  bool satisfied = false;
  bool rank_ok = false;
  std::optional<Complex> rank_witness;
  /// Allowed removals: deg J14 - M (linear) or M (quadratic); 0 when not satisfied.
  int removals = 0;
  Degree max_degree = Degree::negative_infinity();
  /// Degree of every minor named by the condition, e.g. {"J14", 2}.
  std::map<std::string, Degree> degrees;
  std::string message;
};

/// deg J14 = deg J32 >= max{deg J13, deg J42, M} and rank 2.
ConditionReport check_theorem1_conditions(const LinearBC& bc);
/// deg J03 = deg J12 = M and rank 2.
ConditionReport check_theorem2_conditions(const QuadraticBC& bc);

/// Taylor data of phi_0, psi_0 at the two points the boundary forms use.
struct EndpointData {
  Complex lambda{0.0};
  int kmax = 0;
  /// [k] -> 2x2 matrix [[phi1, psi1], [phi2, psi2]] of Taylor coefficients.
  std::vector<Eigen::Matrix2cd> half;
  std::vector<Eigen::Matrix2cd> one;
  Complex wronskian_half{0.0};
  Complex wronskian_one{0.0};
};

/// chi(lambda) together with the magnitude of its largest product term,
/// the natural yardstick for "zero" in floating point.
struct CharValue {
  Complex value{0.0};
  double scale = 0.0;
};

/// Evaluation context for one problem. Endpoint data of phi_0, psi_0 is
/// cached per lambda; the cache is safe under concurrent use.
class CharContext {
 public:
  CharContext(SystemSpec spec, BoundarySpec bc, GridConfig grid);

  const SystemSpec& spec() const { return spec_; }
  const BoundarySpec& bc() const { return bc_; }
  const GridConfig& grid() const { return grid_; }

  EndpointData endpoints(Complex lambda, int kmax = 0) const;
  /// Full fundamental solution at alpha = 0 (not cached).
  FundamentalSolution fundamental(Complex lambda, int kmax = 0) const;

  CharValue evaluate(Complex lambda) const;
  /// Taylor coefficients of chi at lambda up to `order`.
  ComplexJet evaluate_jet(Complex lambda, int order) const;

  void set_cache_enabled(bool enabled) { cache_enabled_ = enabled; }
  std::size_t cache_size() const;

 private:
  SystemSpec spec_;
  BoundarySpec bc_;
  GridConfig grid_;
  bool cache_enabled_ = true;
  mutable std::unique_ptr<std::mutex> mutex_;
  mutable std::map<std::tuple<double, double, int>, EndpointData> cache_;
};

/// Q11, Q12, Q21, Q22 of the linear characteristic matrix.
std::array<Complex, 4> linear_q(const LinearBC& bc, const EndpointData& e);
/// Q11, Q12, Q13, Q21, Q22, Q23 of the quadratic system in (A, B).
std::array<Complex, 6> quadratic_q(const QuadraticBC& bc, const EndpointData& e);
/// Taylor coefficients of the same entries up to `order` (<= e.kmax).
std::array<ComplexJet, 4> linear_q_jet(const LinearBC& bc, const EndpointData& e, int order);
std::array<ComplexJet, 6> quadratic_q_jet(const QuadraticBC& bc, const EndpointData& e, int order);

Complex eval_char_linear(const CharContext& ctx, Complex lambda);
Complex eval_char_quadratic(const CharContext& ctx, Complex lambda);
Complex eval_char_separated(const CharContext& ctx, Complex lambda);

/// 4x4 Sylvester resultant of the quadratic system (cross-check path).
Complex eval_char_quadratic_sylvester(const CharContext& ctx, Complex lambda);
/// J12 + J13 psi01(1) + J14 psi02(1) + J32 phi01(1) + J42 phi02(1) + J34 W(1).
Complex char_minor_expansion(const CharContext& ctx, Complex lambda);

struct Asymptote {
  Complex prediction{0.0};
  /// Non-empty when the prediction rests on a choice between conflicting formulas.
  std::string note;
};

/// Leading exponential term of chi for |Im lambda| >= threshold; the
/// default threshold is 5/(b-a). Throws SpecError below it.
Asymptote char_asymptote(const CharContext& ctx, Complex lambda, std::optional<double> threshold = std::nullopt);

struct LeadingRatio {
  /// C11 C22 / (C12 C21): pairing of the zero-potential closed form.
  Complex derived{0.0};
  /// C11 C21 / (C12 C22): the alternative pairing C1 / C2.
  Complex stated{0.0};
};

LeadingRatio leading_ratio(const SeparatedBC& sbc);

}  // namespace dirac
