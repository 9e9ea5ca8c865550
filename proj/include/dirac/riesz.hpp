#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dirac/eigensystem.hpp"

namespace dirac {

/// Root functions removed from a system: closed under raising the order
/// within a chain.
class ExclusionSet {
 public:
  struct Member {
    std::size_t point = 0;  // index into the spectral point list
    int order = 0;
    auto operator<=>(const Member&) const = default;
  };

  ExclusionSet() = default;
  ExclusionSet(std::vector<Member> removed, int target_size);

  const std::vector<Member>& removed() const { return removed_; }
  int target_size() const { return target_size_; }
  bool contains(std::size_t point, int order) const;
  bool removes_point(std::size_t point) const;

 private:
  std::vector<Member> removed_;
  int target_size_ = 0;
};

enum class ExclusionStrategy { LowestModulus, Explicit };

/// Chains have length equal to the multiplicity. LowestModulus removes
/// chains of the smallest |lambda| first, top order downward. Explicit
/// validates `explicit_members` for size N and closure. Throws SpecError
/// when no closed set of size N exists.
ExclusionSet select_exclusion(const std::vector<SpectralPoint>& points, int n, ExclusionStrategy strategy,
                              const std::vector<ExclusionSet::Member>& explicit_members = {});

/// Function on [a, b] kept as two uniform pieces: left[j] at
/// x = a + j |a| / (m - 1), right[j] at x = j b / (m - 1).
struct TransformedFunction {
  double a = -1.0, b = 1.0;
  Eigen::VectorXcd left;
  Eigen::VectorXcd right;

  int points() const { return static_cast<int>(left.size()); }
};

Complex inner_product(const TransformedFunction& f, const TransformedFunction& g);
double l2_norm(const TransformedFunction& f);

/// x in (a, 0): y1(x / a) / C12;  x in (0, b): -y2(x / b) / C11.
/// Resampled with local cubic interpolation onto `points` nodes per piece
/// (0: same count as y).
TransformedFunction operator_A(const SystemSpec& spec, const SeparatedBC& sbc, const Samples& y, int points = 0);
/// y1(s) = C12 F(a s), y2(s) = -C11 F(b s) on an n-point grid of [0, 1].
Samples inverse_operator_A(const SystemSpec& spec, const SeparatedBC& sbc, const TransformedFunction& f,
                           int n_points = 0);

struct ReferenceFunction {
  int n = 0;
  /// exponent mu with f(x) = exp(i mu x); mu is the model root of index n.
  Complex mu{0.0};
  TransformedFunction samples;
  /// Closed-form int_a^b |f|^2.
  double norm_sq = 0.0;
};

ReferenceFunction reference_basis(const SeparatedBC& sbc, const SystemSpec& spec, int n, int points);

/// Order-0 branch-1 function at pt divided by lambda^N0, so that its image
/// under A approaches the reference exponential.
Samples aligned_eigenfunction(const CharContext& ctx, const SpectralPoint& pt);

/// Eigenfunctions of a separated problem keyed by strip index.
struct RieszSystem {
  std::map<int, SpectralPoint> points;
  std::map<int, Samples> eigenfunctions;
  std::map<int, TransformedFunction> transformed;
  std::map<int, ReferenceFunction> reference;
};

/// Needs simple eigenvalues with distinct strip indices; throws SpecError otherwise.
RieszSystem assemble_riesz_system(const CharContext& ctx, const std::vector<SpectralPoint>& points);

struct TailReport {
  std::vector<int> n;
  /// ||A omega_n - ref_n||^2 aligned with n.
  std::vector<double> term;
  /// |n| ||A omega_n - ref_n||.
  std::vector<double> scaled;
  std::vector<int> K;
  /// S_K = sum over |n| <= K of term.
  std::vector<double> partial_sum;
};

/// Throws SpecError when the two index sets differ.
TailReport tail_sum(const std::map<int, TransformedFunction>& transformed,
                    const std::map<int, ReferenceFunction>& reference);

struct GramReport {
  int size = 0;
  double condition = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// Rank-deficient: condition above 1e12 or a non-positive eigenvalue.
  bool failed = false;
};

/// Condition number of the Gram matrix of the normalized functions.
GramReport gram_condition(const std::vector<Samples>& functions);
/// Functions with |n| <= K; throws SpecError unless there are exactly 2K + 1.
GramReport gram_condition(const std::map<int, Samples>& functions, int K);

/// Test functions (1, 0), (0, 1), (x, 0), (0, x), (x^2, 0), (0, x^2) and
/// a unit step at x = 1/2 in both components.
std::vector<Samples> default_test_set(int n_points);

struct CompletenessRow {
  int K = 0;
  /// ||f - P_K f|| per test function.
  std::vector<double> residual;
  /// residual / ||f||.
  std::vector<double> relative;
};

/// Least-squares projection onto the functions with |n| <= K for each K.
std::vector<CompletenessRow> completeness_residual(const std::map<int, Samples>& functions,
                                                   const std::vector<Samples>& test_set, const std::vector<int>& Ks);

}  // namespace dirac
