#include "dirac/cauchy.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <unsupported/Eigen/MatrixFunctions>

namespace dirac {

namespace {

constexpr int kMaxDerivativeOrder = 4;

struct KernelSlot {
  int row;
  int col;
  const ScalarFunction* f;
  const ScalarFunction* g;
};

// Generator of the augmented system. State: (y1, y2, G_1, ..., G_T) where
// G_t(x) = int_0^x g_t(s) y_col(s) ds, so int_0^x f_t(x) g_t(s) y_col ds = f_t(x) G_t(x).
// Derivative chains stack K+1 copies: Y_k' = A Y_k + E Y_{k-1}, E = dA/dlambda.
class Propagator {
 public:
  Propagator(const SystemSpec& spec, Complex lambda, int kmax) : spec_(spec), lambda_(lambda), kmax_(kmax) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        for (const auto& term : spec.kernel.entry(r, c))
          if (!term.f.is_zero() && !term.g.is_zero()) slots_.push_back({r, c, &term.f, &term.g});
    d_ = 2 + static_cast<int>(slots_.size());
  }

  int d() const { return d_; }
  int dim() const { return d_ * (kmax_ + 1); }

  Eigen::MatrixXcd generator(double x) const {
    const Complex ia = kI * spec_.a, ib = kI * spec_.b;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d_, d_);
    a(0, 0) = ia * lambda_;
    a(0, 1) = -ia * spec_.q1(x);
    a(1, 0) = -ib * spec_.q2(x);
    a(1, 1) = ib * lambda_;
    for (int t = 0; t < static_cast<int>(slots_.size()); ++t) {
      const auto& s = slots_[static_cast<std::size_t>(t)];
      a(2 + t, s.col) = (*s.g)(x);
      a(s.row, 2 + t) = -(s.row == 0 ? ia : ib) * (*s.f)(x);
    }
    if (kmax_ == 0) return a;

    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(dim(), dim());
    for (int k = 0; k <= kmax_; ++k) {
      big.block(k * d_, k * d_, d_, d_) = a;
      if (k > 0) {
        big(k * d_, (k - 1) * d_) = ia;
        big(k * d_ + 1, (k - 1) * d_ + 1) = ib;
      }
    }
    return big;
  }

  /// Fourth-order Magnus step from x0 over signed length h.
  Eigen::MatrixXcd step(double x0, double h) const {
    static const double r3 = std::sqrt(3.0);
    const Eigen::MatrixXcd a1 = generator(x0 + (0.5 - r3 / 6.0) * h);
    const Eigen::MatrixXcd a2 = generator(x0 + (0.5 + r3 / 6.0) * h);
    const Eigen::MatrixXcd omega = 0.5 * h * (a1 + a2) + (r3 * h * h / 12.0) * (a2 * a1 - a1 * a2);
    if (omega.rows() == 2) return exp2x2(omega);
    return omega.exp();
  }

 private:
  static Eigen::MatrixXcd exp2x2(const Eigen::MatrixXcd& m) {
    const Complex mu = 0.5 * (m(0, 0) + m(1, 1));
    Eigen::Matrix2cd n = m;
    n(0, 0) -= mu;
    n(1, 1) -= mu;
    const Complex delta = n(0, 0) * n(0, 0) + n(0, 1) * n(1, 0);  // n^2 = delta I
    const Complex s = std::sqrt(delta);
    const Complex sinhc = std::abs(s) < 1e-4 ? 1.0 + delta / 6.0 + delta * delta / 120.0 : std::sinh(s) / s;
    const Eigen::Matrix2cd out = std::exp(mu) * (std::cosh(s) * Eigen::Matrix2cd::Identity() + sinhc * n);
    return out;
  }

  const SystemSpec& spec_;
  Complex lambda_;
  int kmax_;
  std::vector<KernelSlot> slots_;
  int d_ = 2;
};

void check_range(double magnitude) {
  if (!(magnitude <= kDynamicRangeLimit)) throw NumericalError("dynamic range exceeded; reduce |Im λ|");
}

FundamentalSolution empty_solution(double alpha, Complex lambda, const GridConfig& grid, int kmax) {
  if (kmax < 0 || kmax > kMaxDerivativeOrder) throw SpecError("kmax must lie in 0..4");
  validate_grid(grid);
  if (!is_finite(lambda)) throw SpecError("lambda must be finite");
  FundamentalSolution fs;
  fs.alpha = alpha;
  fs.lambda = lambda;
  fs.grid = grid;
  fs.kmax = kmax;
  fs.phi.assign(static_cast<std::size_t>(kmax) + 1, Samples::Zero(2, grid.n_points));
  fs.psi.assign(static_cast<std::size_t>(kmax) + 1, Samples::Zero(2, grid.n_points));
  fs.wronskian = Eigen::VectorXcd::Zero(grid.n_points);
  return fs;
}

FundamentalSolution solve_free(const SystemSpec& spec, double alpha, Complex lambda, const GridConfig& grid,
                               int kmax) {
  FundamentalSolution fs = empty_solution(alpha, lambda, grid, kmax);
  const int j0 = grid.node_index(alpha);
  for (int j = 0; j < grid.n_points; ++j) {
    const double s = grid.node(j) - grid.node(j0);
    const Complex ea = std::exp(kI * spec.a * lambda * s), eb = std::exp(kI * spec.b * lambda * s);
    check_range(std::max(std::abs(ea), std::abs(eb)));
    Complex ca = 1.0, cb = 1.0;
    for (int k = 0; k <= kmax; ++k) {
      fs.phi[static_cast<std::size_t>(k)](0, j) = ca * ea;
      fs.psi[static_cast<std::size_t>(k)](1, j) = cb * eb;
      ca *= kI * spec.a * s / static_cast<double>(k + 1);
      cb *= kI * spec.b * s / static_cast<double>(k + 1);
    }
    fs.wronskian(j) = std::exp(kI * (spec.a + spec.b) * lambda * s);
  }
  return fs;
}

// Sweeps from node j0 toward node `end` (inclusive). Valid whenever the
// augmented state at j0 is known, i.e. j0 = 0 or a zero kernel.
void sweep(const Propagator& prop, const GridConfig& grid, int j0, int end, FundamentalSolution& fs) {
  const int d = prop.d(), dim = prop.dim();
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(dim, 2);
  z(0, 0) = 1.0;
  z(1, 1) = 1.0;
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d, d);
  w(0, 1) = 1.0;
  w(1, 0) = -1.0;

  const int dir = end >= j0 ? 1 : -1;
  for (int j = j0; j != end; j += dir) {
    const double h = dir * grid.step();
    const Eigen::MatrixXcd p = prop.step(grid.node(j), h);
    z = p * z;
    const Eigen::MatrixXcd pd = p.topLeftCorner(d, d);
    w = pd * w * pd.transpose();
    w = 0.5 * (w - w.transpose()).eval();  // roundoff in the symmetric part grows like the solution squared
    check_range(z.cwiseAbs().maxCoeff());
    check_range(w.cwiseAbs().maxCoeff());

    const int jn = j + dir;
    for (int k = 0; k <= fs.kmax; ++k) {
      fs.phi[static_cast<std::size_t>(k)].col(jn) = z.block(k * d, 0, 2, 1);
      fs.psi[static_cast<std::size_t>(k)].col(jn) = z.block(k * d, 1, 2, 1);
    }
    fs.wronskian(jn) = w(0, 1);
  }
}

void set_initial(FundamentalSolution& fs, int j0) {
  for (int k = 0; k <= fs.kmax; ++k) {
    fs.phi[static_cast<std::size_t>(k)].col(j0).setZero();
    fs.psi[static_cast<std::size_t>(k)].col(j0).setZero();
  }
  fs.phi[0](0, j0) = 1.0;
  fs.psi[0](1, j0) = 1.0;
  fs.wronskian(j0) = 1.0;
}

// phi_alpha = Y_0 Y_0(alpha)^{-1} in truncated Taylor arithmetic.
FundamentalSolution rebase(const FundamentalSolution& base, double alpha) {
  const GridConfig& grid = base.grid;
  const int kmax = base.kmax;
  FundamentalSolution fs = empty_solution(alpha, base.lambda, grid, kmax);
  const int j0 = grid.node_index(alpha);

  std::vector<Eigen::Matrix2cd> s(static_cast<std::size_t>(kmax) + 1);
  s[0] = base.matrix(j0, 0).inverse();
  for (int k = 1; k <= kmax; ++k) {
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    for (int j = 1; j <= k; ++j) acc += base.matrix(j0, j) * s[static_cast<std::size_t>(k - j)];
    s[static_cast<std::size_t>(k)] = -s[0] * acc;
  }

  const Complex w0 = base.wronskian(j0);
  for (int node = 0; node < grid.n_points; ++node) {
    for (int k = 0; k <= kmax; ++k) {
      Eigen::Matrix2cd y = Eigen::Matrix2cd::Zero();
      for (int j = 0; j <= k; ++j) y += base.matrix(node, j) * s[static_cast<std::size_t>(k - j)];
      check_range(y.cwiseAbs().maxCoeff());
      fs.phi[static_cast<std::size_t>(k)].col(node) = y.col(0);
      fs.psi[static_cast<std::size_t>(k)].col(node) = y.col(1);
    }
    fs.wronskian(node) = base.wronskian(node) / w0;
  }
  set_initial(fs, j0);
  return fs;
}

FundamentalSolution solve_general(const SystemSpec& spec, double alpha, Complex lambda, const GridConfig& grid,
                                  int kmax) {
  FundamentalSolution fs = empty_solution(alpha, lambda, grid, kmax);
  const int j0 = grid.node_index(alpha);
  if (j0 != 0 && !spec.kernel.is_zero())
    return rebase(solve_general(spec, 0.0, lambda, grid, kmax), alpha);

  const Propagator prop(spec, lambda, kmax);
  set_initial(fs, j0);
  sweep(prop, grid, j0, grid.n_points - 1, fs);
  sweep(prop, grid, j0, 0, fs);
  return fs;
}

}  // namespace

Samples FundamentalSolution::dphi(int k) const {
  return std::tgamma(k + 1.0) * phi.at(static_cast<std::size_t>(k));
}

Samples FundamentalSolution::dpsi(int k) const {
  return std::tgamma(k + 1.0) * psi.at(static_cast<std::size_t>(k));
}

Eigen::Matrix2cd FundamentalSolution::matrix(int node, int k) const {
  Eigen::Matrix2cd m;
  m.col(0) = phi.at(static_cast<std::size_t>(k)).col(node);
  m.col(1) = psi.at(static_cast<std::size_t>(k)).col(node);
  return m;
}

FundamentalSolution solve_fundamental(const SystemSpec& spec, double alpha, Complex lambda, const GridConfig& grid,
                                      int kmax) {
  if (spec.is_free()) {
    empty_solution(alpha, lambda, grid, kmax);
    return solve_free(spec, alpha, lambda, grid, kmax);
  }
  return solve_general(spec, alpha, lambda, grid, kmax);
}

FundamentalSolution solve_fundamental_numeric(const SystemSpec& spec, double alpha, Complex lambda,
                                              const GridConfig& grid, int kmax) {
  return solve_general(spec, alpha, lambda, grid, kmax);
}

Complex wronskian(const FundamentalSolution& fs, double x) { return fs.wronskian(fs.grid.node_index(x)); }

Complex wronskian_direct(const FundamentalSolution& fs, double x) {
  return fs.matrix(fs.grid.node_index(x)).determinant();
}

GrowthReport validate_growth(const SystemSpec& spec, const GridConfig& grid, const std::vector<Complex>& lambdas,
                             double alpha) {
  GrowthReport report;
  report.alpha = alpha;
  report.smooth = validate_spec(spec).smooth;
  for (const Complex lambda : lambdas) {
    const FundamentalSolution fs = solve_fundamental(spec, alpha, lambda, grid, 0);
    GrowthSample sample;
    sample.lambda = lambda;
    for (int j = 0; j < grid.n_points; ++j) {
      const double s = grid.node(j) - alpha;
      if (s == 0.0) continue;
      const int side = s > 0.0 ? 1 : 0;
      const Complex ea = std::exp(kI * spec.a * lambda * s), eb = std::exp(kI * spec.b * lambda * s);
      const double dominant = std::max(std::abs(ea), std::abs(eb));
      const std::array<Complex, 4> dev = {fs.phi[0](0, j) - ea, fs.phi[0](1, j), fs.psi[0](0, j),
                                          fs.psi[0](1, j) - eb};
      for (int c = 0; c < 4; ++c) {
        double& slot = sample.component[static_cast<std::size_t>(c)][static_cast<std::size_t>(side)];
        slot = std::max(slot, std::abs(dev[static_cast<std::size_t>(c)]) / dominant);
      }
    }
    for (const auto& comp : sample.component)
      for (double v : comp) sample.deviation = std::max(sample.deviation, v);
    sample.im_scaled = std::abs(lambda.imag()) * sample.deviation;
    sample.abs_scaled = std::abs(lambda) * sample.deviation;
    report.samples.push_back(sample);
  }
  for (std::size_t i = 1; i < report.samples.size(); ++i) {
    const auto& prev = report.samples[i - 1];
    const auto& cur = report.samples[i];
    const double ri = prev.im_scaled > 0.0 ? cur.im_scaled / prev.im_scaled : 0.0;
    const double ra = prev.abs_scaled > 0.0 ? cur.abs_scaled / prev.abs_scaled : 0.0;
    report.im_ratios.push_back(ri);
    report.abs_ratios.push_back(ra);
    report.max_im_ratio = std::max(report.max_im_ratio, ri);
    report.max_abs_ratio = std::max(report.max_abs_ratio, ra);
  }
  return report;
}

void write_csv(std::ostream& out, const FundamentalSolution& fs) {
  out << "x,re_phi1,im_phi1,re_phi2,im_phi2,re_psi1,im_psi1,re_psi2,im_psi2\n";
  char buf[64];
  for (int j = 0; j < fs.grid.n_points; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", fs.grid.node(j));
    out << buf;
    for (const Complex v : {fs.phi[0](0, j), fs.phi[0](1, j), fs.psi[0](0, j), fs.psi[0](1, j)}) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", v.real(), v.imag());
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace dirac
