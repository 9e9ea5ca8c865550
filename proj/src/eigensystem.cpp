#include "dirac/eigensystem.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace dirac {

namespace {

constexpr int kMaxChainOrder = 4;
constexpr double kZeroTolerance = 1e-10;
constexpr double kRankTolerance = 1e-8;

double sup(const Samples& y) { return y.cwiseAbs().maxCoeff(); }

EndpointData endpoint_data(const FundamentalSolution& fs) {
  EndpointData e;
  e.lambda = fs.lambda;
  e.kmax = fs.kmax;
  const int mid = fs.grid.midpoint_node(), last = fs.grid.n_points - 1;
  for (int k = 0; k <= fs.kmax; ++k) {
    e.half.push_back(fs.matrix(mid, k));
    e.one.push_back(fs.matrix(last, k));
  }
  e.wronskian_half = fs.wronskian(mid);
  e.wronskian_one = fs.wronskian(last);
  return e;
}

const LinearBC* as_linear(const BoundarySpec& bc, LinearBC& storage) {
  if (const auto* l = std::get_if<LinearBC>(&bc)) return l;
  if (const auto* s = std::get_if<SeparatedBC>(&bc)) {
    storage = s->to_linear();
    return &storage;
  }
  return nullptr;
}

// Coefficient jets (A, B) with omega = A phi0 + B psi0.
std::pair<ComplexJet, ComplexJet> omega_coefficients(const BoundarySpec& bc, const EndpointData& e, int branch,
                                                     int order) {
  LinearBC storage;
  if (const LinearBC* lin = as_linear(bc, storage)) {
    const auto q = linear_q_jet(*lin, e, order);
    if (branch == 1) return {q[1], -q[0]};
    return {q[3], -q[2]};
  }
  const auto q = quadratic_q_jet(std::get<QuadraticBC>(bc), e, order);
  const ComplexJet d12 = q[0] * q[4] - q[1] * q[3];
  const ComplexJet d13 = q[0] * q[5] - q[2] * q[3];
  const ComplexJet d23 = q[1] * q[5] - q[2] * q[4];
  if (branch == 1) return {d13, -d12};
  return {d23, -d13};
}

ComplexJet node_jet(const std::vector<Samples>& chain, int row, int node, int order) {
  ComplexJet j(order);
  for (int m = 0; m <= order && m < static_cast<int>(chain.size()); ++m) j[m] = chain[static_cast<std::size_t>(m)](row, node);
  return j;
}

// Integral of y over [x_j, x_{j+1}] for every j, from local cubics.
Eigen::VectorXcd cumulative_integral(const Eigen::VectorXcd& y) {
  const Eigen::Index n = y.size();
  const double h = 1.0 / static_cast<double>(n - 1);
  Eigen::VectorXcd out(n);
  out(0) = 0.0;
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    Complex piece;
    if (j == 0)
      piece = 9.0 * y(0) + 19.0 * y(1) - 5.0 * y(2) + y(3);
    else if (j == n - 2)
      piece = y(n - 4) - 5.0 * y(n - 3) + 19.0 * y(n - 2) + 9.0 * y(n - 1);
    else
      piece = -y(j - 1) + 13.0 * y(j) + 13.0 * y(j + 1) - y(j + 2);
    out(j + 1) = out(j) + h / 24.0 * piece;
  }
  return out;
}

Eigen::VectorXcd derivative(const Eigen::VectorXcd& y) {
  const Eigen::Index n = y.size();
  const double c = static_cast<double>(n - 1) / 12.0;  // 1 / (12 h)
  Eigen::VectorXcd d(n);
  for (Eigen::Index j = 2; j + 2 < n; ++j) d(j) = c * (y(j - 2) - 8.0 * y(j - 1) + 8.0 * y(j + 1) - y(j + 2));
  d(0) = c * (-25.0 * y(0) + 48.0 * y(1) - 36.0 * y(2) + 16.0 * y(3) - 3.0 * y(4));
  d(1) = c * (-3.0 * y(0) - 10.0 * y(1) + 18.0 * y(2) - 6.0 * y(3) + y(4));
  const Eigen::Index e = n - 1;
  d(e) = -c * (-25.0 * y(e) + 48.0 * y(e - 1) - 36.0 * y(e - 2) + 16.0 * y(e - 3) - 3.0 * y(e - 4));
  d(e - 1) = -c * (-3.0 * y(e) - 10.0 * y(e - 1) + 18.0 * y(e - 2) - 6.0 * y(e - 3) + y(e - 4));
  return d;
}

std::vector<RootFunction> build(const CharContext& ctx, const SpectralPoint& pt) {
  if (pt.multiplicity < 1) throw SpecError("multiplicity must be positive");
  if (pt.multiplicity > kMaxChainOrder + 1)
    throw SpecError("multiplicity " + std::to_string(pt.multiplicity) + " exceeds the derivative order limit");
  const int order = pt.multiplicity - 1;

  struct Candidate {
    int branch, order;
    Samples u;
    double scale;
  };
  std::vector<Candidate> candidates;
  double chain_max = 0.0;
  for (int branch = 1; branch <= 2; ++branch) {
    std::vector<double> scales;
    auto chain = omega_chain(ctx, pt.lambda, branch, order, &scales);
    for (int k = 0; k <= order; ++k) {
      chain_max = std::max(chain_max, sup(chain[static_cast<std::size_t>(k)]));
      candidates.push_back({branch, k, std::move(chain[static_cast<std::size_t>(k)]), scales[static_cast<std::size_t>(k)]});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& l, const Candidate& r) { return l.order < r.order; });

  std::vector<RootFunction> out;
  std::vector<Samples> basis;
  for (Candidate& c : candidates) {
    const double scale = std::max(c.scale, chain_max);
    if (sup(c.u) < kZeroTolerance * scale) continue;
    const double norm = l2_norm(c.u);
    Samples r = c.u;
    for (const Samples& q : basis) r -= inner_product(q, r) * q;
    const double rest = l2_norm(r);
    if (rest <= kRankTolerance * norm) continue;
    basis.push_back(r / rest);
    out.push_back({pt, c.branch, c.order, std::move(c.u), norm, scale});
  }
  return out;
}

}  // namespace

std::vector<Samples> omega_chain(const CharContext& ctx, Complex lambda, int branch, int order,
                                 std::vector<double>* scales) {
  if (branch != 1 && branch != 2) throw SpecError("branch must be 1 or 2");
  if (order < 0 || order > kMaxChainOrder) throw SpecError("chain order must lie in 0..4");
  const FundamentalSolution fs = ctx.fundamental(lambda, order);
  const auto [A, B] = omega_coefficients(ctx.bc(), endpoint_data(fs), branch, order);

  std::vector<Samples> u;
  if (scales) scales->assign(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    Samples s = Samples::Zero(2, fs.grid.n_points);
    for (int m = 0; m <= k; ++m) {
      const auto& phi = fs.phi[static_cast<std::size_t>(k - m)];
      const auto& psi = fs.psi[static_cast<std::size_t>(k - m)];
      s += A[m] * phi + B[m] * psi;
      if (scales) (*scales)[static_cast<std::size_t>(k)] += std::abs(A[m]) * sup(phi) + std::abs(B[m]) * sup(psi);
    }
    u.push_back(std::move(s));
  }
  return u;
}

std::vector<RootFunction> build_root_functions_linear(const CharContext& ctx, const SpectralPoint& pt) {
  if (std::holds_alternative<QuadraticBC>(ctx.bc())) throw SpecError("build_root_functions_linear needs linear conditions");
  return build(ctx, pt);
}

std::vector<RootFunction> build_root_functions_quadratic(const CharContext& ctx, const SpectralPoint& pt) {
  if (!std::holds_alternative<QuadraticBC>(ctx.bc()))
    throw SpecError("build_root_functions_quadratic needs quadratic conditions");
  return build(ctx, pt);
}

std::vector<RootFunction> build_root_functions(const CharContext& ctx, const SpectralPoint& pt) {
  return build(ctx, pt);
}

std::pair<Complex, Complex> bc_residual(const BoundarySpec& bc, const Samples& y, Complex lambda) {
  return bc_residual_chain(bc, {y}, lambda, 0);
}

std::pair<Complex, Complex> bc_residual_chain(const BoundarySpec& bc, const std::vector<Samples>& chain,
                                              Complex lambda, int k) {
  if (chain.empty()) throw SpecError("empty chain");
  const int n = static_cast<int>(chain.front().cols());
  const int last = n - 1, mid = (n - 1) / 2;
  auto v = [&](int row, int node) { return node_jet(chain, row, node, k); };
  auto P = [&](const ComplexPolynomial& p) { return ComplexJet::of(p, lambda, k); };

  LinearBC storage;
  if (const LinearBC* lin = as_linear(bc, storage)) {
    const ComplexJet y10 = v(0, 0), y20 = v(1, 0), y11 = v(0, last), y21 = v(1, last);
    auto row = [&](int r) {
      return P(lin->P(r, 1)) * y10 + P(lin->P(r, 2)) * y20 + P(lin->P(r, 3)) * y11 + P(lin->P(r, 4)) * y21;
    };
    return {row(1)[k], row(2)[k]};
  }
  const auto& q = std::get<QuadraticBC>(bc);
  const ComplexJet a = v(0, 0), b = v(1, 0), c = v(0, mid), d = v(1, mid);
  const std::array<ComplexJet, 10> products{a * a, b * b, c * c, d * d, a * b, a * c, a * d, b * c, b * d, c * d};
  auto row = [&](int r) {
    ComplexJet s(k);
    for (int j = 0; j < 10; ++j) s += P(q.P(r, j)) * products[static_cast<std::size_t>(j)];
    return s;
  };
  return {row(1)[k], row(2)[k]};
}

double chain_residual(const SystemSpec& spec, Complex lambda, const Samples& u, const Samples& previous) {
  const Eigen::Index n = u.cols();
  if (n < 5) throw SpecError("chain_residual needs at least five nodes");
  if (previous.size() != 0 && previous.cols() != n) throw SpecError("chain members live on different grids");
  const double h = 1.0 / static_cast<double>(n - 1);

  Samples memory = Samples::Zero(2, n);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (const SeparableTerm& term : spec.kernel.entry(r, c)) {
        Eigen::VectorXcd gu(n);
        for (Eigen::Index j = 0; j < n; ++j) gu(j) = term.g(static_cast<double>(j) * h) * u(c, j);
        const Eigen::VectorXcd cum = cumulative_integral(gu);
        for (Eigen::Index j = 0; j < n; ++j) memory(r, j) += term.f(static_cast<double>(j) * h) * cum(j);
      }

  const Eigen::VectorXcd d1 = derivative(u.row(0).transpose()), d2 = derivative(u.row(1).transpose());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) * h;
    Complex r1 = d1(j) / (kI * spec.a) + spec.q1(x) * u(1, j) + memory(0, j) - lambda * u(0, j);
    Complex r2 = d2(j) / (kI * spec.b) + spec.q2(x) * u(0, j) + memory(1, j) - lambda * u(1, j);
    if (previous.size() != 0) {
      r1 -= previous(0, j);
      r2 -= previous(1, j);
    }
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  return worst;
}

double l2_norm(const Samples& y) { return std::sqrt(std::max(0.0, inner_product(y, y).real())); }

Complex inner_product(const Samples& f, const Samples& g) {
  if (f.cols() != g.cols()) throw SpecError("inner product of functions on different grids");
  const Eigen::VectorXd w = quadrature_weights(static_cast<int>(f.cols()), QuadRule::Simpson);
  Complex s{0.0};
  for (Eigen::Index j = 0; j < f.cols(); ++j)
    s += w(j) * (std::conj(f(0, j)) * g(0, j) + std::conj(f(1, j)) * g(1, j));
  return s;
}

RootFunction normalize(const RootFunction& rf) {
  const double norm = l2_norm(rf.samples);
  if (!(norm > 0.0)) throw NumericalError("cannot normalize a zero function");
  RootFunction out = rf;
  out.samples /= norm;
  out.scale /= norm;
  out.l2_norm = 1.0;
  return out;
}

void write_root_function_csv(std::ostream& out, const RootFunction& rf) {
  out << "x,re_y1,im_y1,re_y2,im_y2\n";
  const Eigen::Index n = rf.samples.cols();
  char buf[128];
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex y1 = rf.samples(0, j), y2 = rf.samples(1, j);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", static_cast<double>(j) / static_cast<double>(n - 1),
                  y1.real(), y1.imag(), y2.real(), y2.imag());
    out << buf;
  }
}

}  // namespace dirac
