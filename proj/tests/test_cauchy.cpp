#include <sstream>
#include <thread>

#include "support.hpp"

using namespace dirac;
using namespace dirac::test;

namespace {

double sample_error(const Samples& got, const Samples& want) {
  double err = 0.0;
  for (Eigen::Index j = 0; j < got.cols(); ++j)
    for (int r = 0; r < 2; ++r) err = std::max(err, std::abs(got(r, j) - want(r, j)));
  return err;
}

/// Samples of a fine solution at the nodes of a coarser grid.
Samples restrict_to(const Samples& fine, int coarse_points) {
  const int stride = static_cast<int>((fine.cols() - 1) / (coarse_points - 1));
  Samples out(2, coarse_points);
  for (int j = 0; j < coarse_points; ++j) out.col(j) = fine.col(j * stride);
  return out;
}

}  // namespace

TEST_CASE("free solutions at lambda = pi match the exponentials") {
  SystemSpec spec;
  spec.a = -1.0;
  spec.b = 2.0;
  const Complex lambda = kPi;
  for (const bool numeric : {false, true}) {
    CAPTURE(numeric);
    const auto fs = numeric ? solve_fundamental_numeric(spec, 0.0, lambda, grid(513))
                            : solve_fundamental(spec, 0.0, lambda, grid(513));
    double err = 0.0;
    for (int j = 0; j < 513; ++j) {
      const double x = grid(513).node(j);
      err = std::max(err, std::abs(fs.phi[0](0, j) - free_phi(spec.a, lambda, x, 0.0)));
      err = std::max(err, std::abs(fs.psi[0](1, j) - free_psi(spec.b, lambda, x, 0.0)));
      err = std::max(err, std::abs(fs.phi[0](1, j)) + std::abs(fs.psi[0](0, j)));
    }
    CHECK(err < 1e-10);
  }
}

TEST_CASE("initial data holds at alpha") {
  const SystemSpec spec = trig_potential();
  for (double alpha : {0.0, 0.5, 1.0}) {
    const auto fs = solve_fundamental(spec, alpha, Complex(3.0, 1.0), grid(129), 2);
    const int j = grid(129).node_index(alpha);
    CHECK(fs.phi[0](0, j) == Complex(1.0));
    CHECK(fs.phi[0](1, j) == Complex(0.0));
    CHECK(fs.psi[0](0, j) == Complex(0.0));
    CHECK(fs.psi[0](1, j) == Complex(1.0));
    for (int k = 1; k <= 2; ++k) {
      CHECK(std::abs(fs.phi[static_cast<std::size_t>(k)].col(j).norm()) == 0.0);
      CHECK(std::abs(fs.psi[static_cast<std::size_t>(k)].col(j).norm()) == 0.0);
    }
  }
  CHECK_THROWS_AS(solve_fundamental(spec, 0.3, 1.0, grid(129)), SpecError);
}

TEST_CASE("grid refinement by four changes the solution by at most 1e-8") {
  const SystemSpec spec = trig_potential();
  const auto coarse = solve_fundamental(spec, 0.0, Complex(10.0, 0.5), grid(513));
  const auto fine = solve_fundamental(spec, 0.0, Complex(10.0, 0.5), grid(2049));
  CHECK(sample_error(coarse.phi[0], restrict_to(fine.phi[0], 513)) < 1e-8);
  CHECK(sample_error(coarse.psi[0], restrict_to(fine.psi[0], 513)) < 1e-8);
}

TEST_CASE("observed order of convergence is at least 3.5") {
  const SystemSpec spec = trig_potential();
  const Complex lambda{6.0, 0.3};
  const auto ref = solve_fundamental(spec, 0.0, lambda, grid(4097));
  const auto e1 = sample_error(solve_fundamental(spec, 0.0, lambda, grid(65)).phi[0], restrict_to(ref.phi[0], 65));
  const auto e2 = sample_error(solve_fundamental(spec, 0.0, lambda, grid(129)).phi[0], restrict_to(ref.phi[0], 129));
  CHECK(std::log2(e1 / e2) >= 3.5);
}

TEST_CASE("Wronskian") {
  SUBCASE("free system") {
    SystemSpec spec;
    const auto fs = solve_fundamental(spec, 0.0, Complex(2.0, 1.0), grid(65));
    CHECK(std::abs(wronskian(fs, 0.0) - 1.0) < 1e-14);
    CHECK(std::abs(wronskian(fs, 1.0) - 1.0) < 1e-12);
  }
  SUBCASE("tracked and direct agree") {
    const auto fs = solve_fundamental(trig_potential(), 0.5, Complex(4.0, -2.0), grid(257));
    for (double x : {0.0, 0.25, 1.0}) CHECK(rel(wronskian(fs, x), wronskian_direct(fs, x)) < 1e-10);
  }
  SUBCASE("without a kernel W(x) = exp(i (a + b) lambda (x - alpha))") {
    SystemSpec spec = trig_potential();
    spec.a = -1.0;
    spec.b = 3.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Complex lambda = random_complex(8.0, 3.0);
      const double alpha = trial % 2 ? 0.5 : 0.0;
      const auto fs = solve_fundamental(spec, alpha, lambda, grid(257));
      for (double x : {0.0, 0.75, 1.0}) {
        const Complex want = std::exp(kI * (spec.a + spec.b) * lambda * (x - alpha));
        CHECK(rel(wronskian(fs, x), want) < 1e-10);
      }
    }
  }
}

TEST_CASE("lambda derivatives match central differences") {
  const SystemSpec spec = trig_potential();
  const Complex lambda{2.5, 0.4};
  const double h = 1e-4;
  const auto fs = solve_fundamental(spec, 0.0, lambda, grid(257), 2);
  const auto plus = solve_fundamental(spec, 0.0, lambda + h, grid(257));
  const auto minus = solve_fundamental(spec, 0.0, lambda - h, grid(257));
  const auto mid = solve_fundamental(spec, 0.0, lambda, grid(257));
  const Samples d1 = (plus.phi[0] - minus.phi[0]) / (2.0 * h);
  const Samples d2 = (plus.psi[0] - 2.0 * mid.psi[0] + minus.psi[0]) / (h * h);
  CHECK(sample_error(fs.dphi(1), d1) < 1e-6);
  CHECK(sample_error(fs.dpsi(2), d2) < 1e-4);
}

TEST_CASE("solutions from different base points compose linearly") {
  // Without a kernel the equation has no memory: restarting at 1/2 from the
  // state of phi_0 reproduces phi_0 on [1/2, 1].
  const SystemSpec spec = trig_potential();
  const Complex lambda{5.0, -1.0};
  const auto base = solve_fundamental(spec, 0.0, lambda, grid(257));
  const auto half = solve_fundamental(spec, 0.5, lambda, grid(257));
  const int m = grid(257).midpoint_node();
  for (int j = m; j < 257; ++j) {
    const Eigen::Vector2cd composed = base.phi[0](0, m) * half.phi[0].col(j) + base.phi[0](1, m) * half.psi[0].col(j);
    CHECK((composed - base.phi[0].col(j)).norm() < 1e-10);
  }
}

TEST_CASE("overflow aborts with a numerical error") {
  SystemSpec spec;
  CHECK_THROWS_AS(solve_fundamental(spec, 0.0, Complex(0.0, 700.0), grid(129)), NumericalError);
  CHECK_THROWS_AS(solve_fundamental_numeric(trig_potential(), 0.0, Complex(0.0, -700.0), grid(129)), NumericalError);
}

TEST_CASE("kmax above four is rejected") {
  CHECK_THROWS_AS(solve_fundamental(SystemSpec{}, 0.0, 1.0, grid(65), 5), SpecError);
}

TEST_CASE("growth along a vertical ray") {
  const SystemSpec spec = trig_potential();
  std::vector<Complex> ray;
  for (int k = 0; k < 4; ++k) ray.emplace_back(0.0, 10.0 * std::pow(2.0, k));
  const auto report = validate_growth(spec, grid(513), ray, 0.5);
  REQUIRE(report.samples.size() == 4);
  CHECK(report.smooth);
  CHECK(report.im_ratios.size() == 3);
  // For a smooth potential the deviation decays like 1 / |lambda|.
  for (std::size_t k = 1; k < report.samples.size(); ++k)
    CHECK(report.samples[k].deviation < report.samples[k - 1].deviation);
  CHECK(report.max_abs_ratio < 2.0);
}

TEST_CASE("CSV export") {
  const auto fs = solve_fundamental(SystemSpec{}, 0.0, 1.0, grid(33));
  std::ostringstream out;
  write_csv(out, fs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,re_phi1,im_phi1,re_phi2,im_phi2,re_psi1,im_psi1,re_psi2,im_psi2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 33);
}

TEST_CASE("concurrent evaluation is deterministic") {
  const CharContext ctx(trig_potential(), all_ones(), grid(257));
  std::vector<Complex> lambdas;
  for (int k = 0; k < 16; ++k) lambdas.emplace_back(0.7 * k, 0.1 * k);
  std::vector<Complex> serial, parallel(lambdas.size());
  for (Complex l : lambdas) serial.push_back(ctx.evaluate(l).value);

  const CharContext fresh(trig_potential(), all_ones(), grid(257));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < lambdas.size(); i += 4) parallel[i] = fresh.evaluate(lambdas[i]).value;
    });
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < lambdas.size(); ++i) CHECK(serial[i] == parallel[i]);
}
