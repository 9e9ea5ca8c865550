#include "support.hpp"

using namespace dirac;
using namespace dirac::test;

TEST_CASE("scalar function terms") {
  const double x = 0.37;
  CHECK(rel(ScalarFunction::monomial(2.0, 3.0)(x), 2.0 * x * x * x) < 1e-15);
  CHECK(rel(ScalarFunction::cosine(Complex(0, 1), 2.0)(x), Complex(0, 1) * std::cos(2.0 * x)) < 1e-15);
  CHECK(rel(ScalarFunction::sine(1.0, kPi)(x), std::sin(kPi * x)) < 1e-15);
  CHECK(ScalarFunction::step(1.0, 0.5)(0.4) == Complex(0.0));
  CHECK(ScalarFunction::step(1.0, 0.5)(0.5) == Complex(1.0));
  CHECK(ScalarFunction::sine(1.0, 1.0).is_smooth());
  CHECK_FALSE(ScalarFunction::step(1.0, 0.5).is_smooth());
  CHECK(ScalarFunction().is_zero());
  CHECK(ScalarFunction::constant(0.0).is_zero());
  const auto sum = ScalarFunction::constant(1.0) + ScalarFunction::monomial(1.0, 1.0);
  CHECK(rel(sum(0.25), 1.25) < 1e-15);
}

TEST_CASE("validate_spec") {
  SUBCASE("zero potential is valid and smooth") {
    const auto r = validate_spec(SystemSpec{});
    CHECK(r.smooth);
    CHECK(r.kernel_bound == 0.0);
  }
  SUBCASE("a must be negative") {
    SystemSpec s;
    s.a = 1.0;
    s.b = 2.0;
    CHECK_THROWS_WITH_AS(validate_spec(s), "a must be negative", SpecError);
  }
  SUBCASE("b must be positive") {
    SystemSpec s;
    s.b = 0.0;
    CHECK_THROWS_AS(validate_spec(s), SpecError);
  }
  SUBCASE("NaN coefficients are rejected") {
    CHECK_THROWS_AS(ScalarFunction::constant(Complex(std::nan(""), 0.0)), SpecError);
    SystemSpec s;
    s.a = std::nan("");
    CHECK_THROWS_AS(validate_spec(s), SpecError);
  }
  SUBCASE("kernel bound on the triangle") {
    SystemSpec s;
    s.a = -1.0;
    s.b = 2.0;
    s.q1 = ScalarFunction::sine(1.0, kPi);
    s.kernel.add(0, 1, ScalarFunction::monomial(1.0, 1.0), ScalarFunction::monomial(1.0, 1.0));
    const auto r = validate_spec(s);
    CHECK(r.smooth);
    // max of x t over 0 <= t <= x <= 1 is attained at x = t = 1
    CHECK(r.kernel_bound == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("step potential is not smooth") {
    SystemSpec s;
    s.q2 = ScalarFunction::step(1.0, 0.5);
    CHECK_FALSE(validate_spec(s).smooth);
  }
}

TEST_CASE("kernel evaluation sums separable terms") {
  KernelFunction k;
  k.add(1, 0, ScalarFunction::monomial(2.0, 1.0), ScalarFunction::cosine(1.0, 1.0));
  k.add(1, 0, ScalarFunction::constant(1.0), ScalarFunction::constant(3.0));
  CHECK(rel(k(1, 0, 0.5, 0.2), 2.0 * 0.5 * std::cos(0.2) + 3.0) < 1e-15);
  CHECK(k(0, 0, 0.5, 0.2) == Complex(0.0));
  CHECK(k.term_count() == 2);
  CHECK_FALSE(k.is_zero());
  CHECK_THROWS_AS(k.add(2, 0, {}, {}), SpecError);
}

TEST_CASE("grid configuration") {
  CHECK_NOTHROW(validate_grid(grid(513)));
  CHECK_THROWS_AS(validate_grid(grid(512)), SpecError);
  CHECK_THROWS_AS(validate_grid(grid(31)), SpecError);
  GridConfig g = grid(33);
  g.newton_tol = 0.0;
  CHECK_THROWS_AS(validate_grid(g), SpecError);
  CHECK(grid(513).node_index(0.5) == 256);
  CHECK_THROWS_AS(grid(513).node_index(0.3), SpecError);
  const Eigen::VectorXd w = quadrature_weights(grid(33));
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rank of a linear boundary matrix") {
  const ComplexPolynomial one = cst(1.0), zero, lam{0.0, 1.0};
  SUBCASE("identity block") {
    LinearBC bc;
    bc.rows = {{{one, zero, zero, zero}, {zero, one, zero, zero}}};
    CHECK(check_rank2(bc).full_rank);
  }
  SUBCASE("proportional rows") {
    LinearBC bc;
    bc.rows = {{{lam, zero, zero, zero}, {lam, zero, zero, zero}}};
    const auto r = check_rank2(bc);
    CHECK_FALSE(r.full_rank);
    CHECK(r.witness.has_value());
  }
  SUBCASE("single nonzero minor with roots") {
    // J12 = lambda^2 - 1, every other minor vanishes
    LinearBC bc;
    bc.rows = {{{lam, one, zero, zero}, {one, lam, zero, zero}}};
    const auto r = check_rank2(bc);
    CHECK_FALSE(r.full_rank);
    REQUIRE(r.witness.has_value());
    CHECK(std::abs(*r.witness * *r.witness - 1.0) < 1e-8);
  }
  SUBCASE("random constant rows have full rank") {
    LinearBC bc;
    for (auto& row : bc.rows)
      for (auto& p : row) p = random_polynomial(0);
    CHECK(check_rank2(bc).full_rank);
  }
}

TEST_CASE("rank of a quadratic boundary matrix") {
  CHECK(check_rank2(factored_square()).full_rank);
  QuadraticBC q;
  q.rows[0][0] = cst(1.0);
  q.rows[1][0] = cst(2.0);
  CHECK_FALSE(check_rank2(q).full_rank);
}

TEST_CASE("separated conditions") {
  const ComplexPolynomial a{1.0, 1.0}, b{2.0, 1.0};
  SUBCASE("embedding round-trips") {
    const auto s = SeparatedBC::make(a, b, cst(1.0), cst(3.0));
    const LinearBC l = s.to_linear();
    CHECK(l.P(1, 3).is_zero());
    CHECK(l.P(1, 4).is_zero());
    CHECK(l.P(2, 1).is_zero());
    CHECK(l.P(2, 2).is_zero());
    const auto back = SeparatedBC::from_linear(l);
    REQUIRE(back.has_value());
    CHECK(back->p11() == a);
    CHECK(back->p12() == b);
    CHECK(back->p22() == cst(3.0));
    CHECK(s.n0() == 1);
    CHECK(s.n1() == 0);
    CHECK(s.c12() == Complex(1.0));
  }
  SUBCASE("from_linear rejects other patterns") {
    LinearBC l = all_ones().to_linear();
    l.rows[0][2] = cst(1.0);
    CHECK_FALSE(SeparatedBC::from_linear(l).has_value());
  }
  SUBCASE("hypotheses") {
    CHECK_THROWS_AS(SeparatedBC::make(a, cst(1.0), cst(1.0), cst(1.0)), SpecError);
    CHECK_THROWS_AS(SeparatedBC::make(a, 2.0 * a, cst(1.0), cst(1.0)), SpecError);
    CHECK_THROWS_AS(SeparatedBC::make(ComplexPolynomial{}, ComplexPolynomial{}, cst(1.0), cst(1.0)), SpecError);
  }
}
