#include "dirac/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace dirac {

namespace {

constexpr double kGramFailure = 1e12;
constexpr double kTikhonov = 1e-12;

// Local cubic through the four nodes around position p (in node units).
Complex interpolate(const Eigen::VectorXcd& y, double p) {
  const Eigen::Index n = y.size();
  const double rounded = std::round(p);
  if (std::abs(p - rounded) < 1e-9 && rounded >= 0 && rounded <= static_cast<double>(n - 1))
    return y(static_cast<Eigen::Index>(rounded));
  Eigen::Index i0 = static_cast<Eigen::Index>(std::floor(p)) - 1;
  i0 = std::clamp<Eigen::Index>(i0, 0, n - 4);
  Complex s{0.0};
  for (int k = 0; k < 4; ++k) {
    double w = 1.0;
    for (int m = 0; m < 4; ++m)
      if (m != k) w *= (p - static_cast<double>(i0 + m)) / static_cast<double>(k - m);
    s += w * y(i0 + k);
  }
  return s;
}

double piece_norm_sq(const Eigen::VectorXcd& f, double length) {
  const Eigen::VectorXd w = quadrature_weights(static_cast<int>(f.size()), QuadRule::Simpson, length);
  return (w.array() * f.array().abs2()).sum();
}

Complex piece_inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g, double length) {
  const Eigen::VectorXd w = quadrature_weights(static_cast<int>(f.size()), QuadRule::Simpson, length);
  Complex s{0.0};
  for (Eigen::Index j = 0; j < f.size(); ++j) s += w(j) * std::conj(f(j)) * g(j);
  return s;
}

void require_leading(const SeparatedBC& sbc) {
  if (sbc.c11() == 0.0 || sbc.c12() == 0.0) throw SpecError("operator A needs nonzero C11 and C12");
}

std::vector<Samples> window(const std::map<int, Samples>& functions, int K) {
  std::vector<Samples> out;
  for (const auto& [n, f] : functions)
    if (std::abs(n) <= K) out.push_back(f);
  return out;
}

}  // namespace

ExclusionSet::ExclusionSet(std::vector<Member> removed, int target_size)
    : removed_(std::move(removed)), target_size_(target_size) {
  std::sort(removed_.begin(), removed_.end());
}

bool ExclusionSet::contains(std::size_t point, int order) const {
  return std::binary_search(removed_.begin(), removed_.end(), Member{point, order});
}

bool ExclusionSet::removes_point(std::size_t point) const {
  return std::any_of(removed_.begin(), removed_.end(), [&](const Member& m) { return m.point == point; });
}

ExclusionSet select_exclusion(const std::vector<SpectralPoint>& points, int n, ExclusionStrategy strategy,
                              const std::vector<ExclusionSet::Member>& explicit_members) {
  if (n < 0) throw SpecError("exclusion size must be non-negative");
  const int available = std::accumulate(points.begin(), points.end(), 0,
                                        [](int s, const SpectralPoint& p) { return s + p.multiplicity; });
  if (n > available)
    throw SpecError("cannot remove " + std::to_string(n) + " root functions; only " + std::to_string(available) +
                    " available");

  if (strategy == ExclusionStrategy::LowestModulus) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      const double mi = std::abs(points[i].lambda), mj = std::abs(points[j].lambda);
      if (mi != mj) return mi < mj;
      if (points[i].lambda.real() != points[j].lambda.real()) return points[i].lambda.real() < points[j].lambda.real();
      return points[i].lambda.imag() < points[j].lambda.imag();
    });
    std::vector<ExclusionSet::Member> removed;
    int left = n;
    for (std::size_t i : order) {
      if (left == 0) break;
      const int m = points[i].multiplicity;
      for (int k = m - 1; k >= 0 && left > 0; --k, --left) removed.push_back({i, k});
    }
    return ExclusionSet(std::move(removed), n);
  }

  std::set<ExclusionSet::Member> members(explicit_members.begin(), explicit_members.end());
  for (const auto& m : members) {
    if (m.point >= points.size()) throw SpecError("excluded member refers to an unknown eigenvalue");
    const int mult = points[m.point].multiplicity;
    if (m.order < 0 || m.order >= mult) throw SpecError("excluded order exceeds the chain length");
    for (int k = m.order + 1; k < mult; ++k)
      if (!members.count({m.point, k}))
        throw SpecError("exclusion set is not closed: order " + std::to_string(k) + " of eigenvalue " +
                        std::to_string(m.point) + " must be removed as well");
  }
  if (static_cast<int>(members.size()) != n) {
    std::ostringstream msg;
    msg << "explicit exclusion has " << members.size() << " members, expected " << n
        << "; closed sets of size 0.." << available << " exist";
    throw SpecError(msg.str());
  }
  return ExclusionSet({members.begin(), members.end()}, n);
}

Complex inner_product(const TransformedFunction& f, const TransformedFunction& g) {
  if (f.points() != g.points() || f.a != g.a || f.b != g.b) throw SpecError("transformed functions on different grids");
  return piece_inner(f.left, g.left, -f.a) + piece_inner(f.right, g.right, f.b);
}

double l2_norm(const TransformedFunction& f) {
  return std::sqrt(piece_norm_sq(f.left, -f.a) + piece_norm_sq(f.right, f.b));
}

TransformedFunction operator_A(const SystemSpec& spec, const SeparatedBC& sbc, const Samples& y, int points) {
  require_leading(sbc);
  const int m = points > 0 ? points : static_cast<int>(y.cols());
  const double last = static_cast<double>(y.cols() - 1);
  const Eigen::VectorXcd y1 = y.row(0).transpose(), y2 = y.row(1).transpose();
  TransformedFunction f;
  f.a = spec.a;
  f.b = spec.b;
  f.left.resize(m);
  f.right.resize(m);
  for (int j = 0; j < m; ++j) {
    const double t = static_cast<double>(j) / (m - 1);
    f.left(j) = interpolate(y1, (1.0 - t) * last) / sbc.c12();  // x / a = 1 - t
    f.right(j) = -interpolate(y2, t * last) / sbc.c11();
  }
  return f;
}

Samples inverse_operator_A(const SystemSpec& spec, const SeparatedBC& sbc, const TransformedFunction& f,
                           int n_points) {
  require_leading(sbc);
  (void)spec;
  const int n = n_points > 0 ? n_points : f.points();
  const double last = static_cast<double>(f.points() - 1);
  Samples y(2, n);
  for (int j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) / (n - 1);
    y(0, j) = sbc.c12() * interpolate(f.left, (1.0 - s) * last);
    y(1, j) = -sbc.c11() * interpolate(f.right, s * last);
  }
  return y;
}

ReferenceFunction reference_basis(const SeparatedBC& sbc, const SystemSpec& spec, int n, int points) {
  if (points < 5 || points % 2 == 0) throw SpecError("reference samples need an odd count >= 5");
  ReferenceFunction r;
  r.n = n;
  r.mu = model_roots(sbc, spec, n, n).front();
  r.samples.a = spec.a;
  r.samples.b = spec.b;
  r.samples.left.resize(points);
  r.samples.right.resize(points);
  for (int j = 0; j < points; ++j) {
    const double t = static_cast<double>(j) / (points - 1);
    r.samples.left(j) = std::exp(kI * r.mu * (spec.a * (1.0 - t)));
    r.samples.right(j) = std::exp(kI * r.mu * (spec.b * t));
  }
  const double kappa = r.mu.imag();
  r.norm_sq = std::abs(kappa) < 1e-14 ? spec.b - spec.a
                                      : (std::exp(-2.0 * kappa * spec.a) - std::exp(-2.0 * kappa * spec.b)) / (2.0 * kappa);
  return r;
}

Samples aligned_eigenfunction(const CharContext& ctx, const SpectralPoint& pt) {
  const auto* sbc = std::get_if<SeparatedBC>(&ctx.bc());
  if (sbc == nullptr) throw SpecError("aligned eigenfunctions need separated conditions");
  Samples u = omega_chain(ctx, pt.lambda, 1, 0).front();
  if (sbc->n0() > 0 && pt.lambda != 0.0) u /= std::pow(pt.lambda, sbc->n0());
  return u;
}

RieszSystem assemble_riesz_system(const CharContext& ctx, const std::vector<SpectralPoint>& points) {
  const auto* sbc = std::get_if<SeparatedBC>(&ctx.bc());
  if (sbc == nullptr) throw SpecError("Riesz diagnostics need separated conditions");
  RieszSystem sys;
  for (const SpectralPoint& p : points) {
    if (!p.strip_index) throw SpecError("spectral point without strip index");
    if (p.multiplicity != 1)
      throw SpecError("strip " + std::to_string(*p.strip_index) + " holds a multiple eigenvalue");
    if (!sys.points.emplace(*p.strip_index, p).second)
      throw SpecError("strip " + std::to_string(*p.strip_index) + " holds more than one eigenvalue");
  }
  const int m = ctx.grid().n_points;
  for (const auto& [n, p] : sys.points) {
    Samples u = aligned_eigenfunction(ctx, p);
    sys.transformed.emplace(n, operator_A(ctx.spec(), *sbc, u, m));
    sys.reference.emplace(n, reference_basis(*sbc, ctx.spec(), n, m));
    sys.eigenfunctions.emplace(n, std::move(u));
  }
  return sys;
}

TailReport tail_sum(const std::map<int, TransformedFunction>& transformed,
                    const std::map<int, ReferenceFunction>& reference) {
  if (transformed.size() != reference.size() ||
      !std::equal(transformed.begin(), transformed.end(), reference.begin(),
                  [](const auto& l, const auto& r) { return l.first == r.first; }))
    throw SpecError("transformed and reference systems are enumerated differently");
  TailReport report;
  int kmax = 0;
  for (const auto& [n, f] : transformed) {
    TransformedFunction d = f;
    const TransformedFunction& ref = reference.at(n).samples;
    if (d.points() != ref.points()) throw SpecError("transformed and reference samples differ in size");
    d.left -= ref.left;
    d.right -= ref.right;
    const double norm = l2_norm(d);
    report.n.push_back(n);
    report.term.push_back(norm * norm);
    report.scaled.push_back(std::abs(n) * norm);
    kmax = std::max(kmax, std::abs(n));
  }
  double s = 0.0;
  for (int K = 0; K <= kmax; ++K) {
    for (std::size_t i = 0; i < report.n.size(); ++i)
      if (std::abs(report.n[i]) == K) s += report.term[i];
    report.K.push_back(K);
    report.partial_sum.push_back(s);
  }
  return report;
}

GramReport gram_condition(const std::vector<Samples>& functions) {
  GramReport r;
  r.size = static_cast<int>(functions.size());
  if (functions.empty()) throw SpecError("Gram matrix of an empty family");
  std::vector<Samples> unit;
  for (const Samples& f : functions) {
    const double norm = l2_norm(f);
    if (!(norm > 0.0)) {
      r.failed = true;
      r.condition = std::numeric_limits<double>::infinity();
      return r;
    }
    unit.push_back(f / norm);
  }
  Eigen::MatrixXcd g(r.size, r.size);
  for (int i = 0; i < r.size; ++i)
    for (int j = i; j < r.size; ++j) {
      g(i, j) = inner_product(unit[i], unit[j]);
      g(j, i) = std::conj(g(i, j));
    }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.max_eigenvalue = es.eigenvalues().maxCoeff();
  r.condition = r.min_eigenvalue > 0.0 ? r.max_eigenvalue / r.min_eigenvalue : std::numeric_limits<double>::infinity();
  r.failed = !(r.condition <= kGramFailure);
  return r;
}

GramReport gram_condition(const std::map<int, Samples>& functions, int K) {
  auto w = window(functions, K);
  if (static_cast<int>(w.size()) != 2 * K + 1)
    throw SpecError("expected " + std::to_string(2 * K + 1) + " functions with |n| <= " + std::to_string(K) +
                    ", found " + std::to_string(w.size()));
  return gram_condition(w);
}

std::vector<Samples> default_test_set(int n_points) {
  std::vector<Samples> out;
  for (int power = 0; power <= 2; ++power)
    for (int row = 0; row < 2; ++row) {
      Samples f = Samples::Zero(2, n_points);
      for (int j = 0; j < n_points; ++j) f(row, j) = std::pow(static_cast<double>(j) / (n_points - 1), power);
      out.push_back(std::move(f));
    }
  Samples step = Samples::Zero(2, n_points);
  for (int j = 0; j < n_points; ++j)
    if (2 * j >= n_points - 1) step.col(j).setOnes();
  out.push_back(std::move(step));
  return out;
}

std::vector<CompletenessRow> completeness_residual(const std::map<int, Samples>& functions,
                                                   const std::vector<Samples>& test_set, const std::vector<int>& Ks) {
  std::vector<CompletenessRow> rows;
  for (int K : Ks) {
    const auto basis = window(functions, K);
    const int m = static_cast<int>(basis.size());
    CompletenessRow row;
    row.K = K;
    Eigen::MatrixXcd g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        g(i, j) = inner_product(basis[i], basis[j]);
        g(j, i) = std::conj(g(i, j));
      }
    const double trace_scale = m > 0 ? g.diagonal().real().maxCoeff() : 1.0;
    if (m > 0) g.diagonal().array() += kTikhonov * trace_scale;
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(g);
    for (const Samples& f : test_set) {
      Samples r = f;
      if (m > 0) {
        Eigen::VectorXcd rhs(m);
        for (int i = 0; i < m; ++i) rhs(i) = inner_product(basis[i], f);
        const Eigen::VectorXcd c = ldlt.solve(rhs);
        for (int i = 0; i < m; ++i) r -= c(i) * basis[i];
      }
      const double res = l2_norm(r), norm = l2_norm(f);
      row.residual.push_back(res);
      row.relative.push_back(norm > 0.0 ? res / norm : 0.0);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dirac
