#include "support.hpp"

using namespace dirac;
using namespace dirac::test;

namespace {

const ComplexPolynomial kLambda{0.0, 1.0};

LinearBC linear_rows(std::array<ComplexPolynomial, 4> r1, std::array<ComplexPolynomial, 4> r2) {
  LinearBC bc;
  bc.rows = {r1, r2};
  return bc;
}

}  // namespace

TEST_CASE("minor table") {
  const LinearBC bc = all_ones().to_linear();
  const MinorTable j = minors(bc);
  CHECK(j(1, 3) == cst(1.0));
  CHECK(j(1, 4) == cst(1.0));
  CHECK(j(2, 3) == cst(1.0));
  CHECK(j(1, 2).is_zero());
  CHECK(j(3, 4).is_zero());
  CHECK(j(1, 1).is_zero());

  for (int trial = 0; trial < 20; ++trial) {
    LinearBC r;
    for (auto& row : r.rows)
      for (auto& p : row) p = random_polynomial(trial % 3);
    const MinorTable t = minors(r);
    for (int a = 1; a <= 4; ++a)
      for (int b = 1; b <= 4; ++b) CHECK(t(a, b) == -t(b, a));
  }
}

TEST_CASE("linear condition check") {
  const ComplexPolynomial one = cst(1.0), zero;
  SUBCASE("constant separated conditions") {
    const auto r = check_theorem1_conditions(all_ones().to_linear());
    CHECK(r.satisfied);
    CHECK(r.removals == 0);
    CHECK(r.degrees.at("J14") == Degree(0));
  }
  SUBCASE("degree two minors") {
    const auto bc = linear_rows({kLambda, kLambda + cst(2.0), zero, zero}, {zero, zero, kLambda - one, 2.0 * kLambda + one});
    const auto r = check_theorem1_conditions(bc);
    CHECK(r.satisfied);
    CHECK(r.degrees.at("J14") == Degree(2));
    CHECK(r.degrees.at("J32") == Degree(2));
    CHECK(r.max_degree == Degree(1));
    CHECK(r.removals == 1);
  }
  SUBCASE("mismatched degrees fail") {
    const auto bc = linear_rows({one, zero, one, kLambda}, {one, one, one, zero});
    const auto r = check_theorem1_conditions(bc);
    CHECK_FALSE(r.satisfied);
    CHECK(r.degrees.at("J14") == Degree(1));
    CHECK(r.degrees.at("J32") == Degree(0));
  }
  SUBCASE("initial-value conditions fail") {
    const auto bc = linear_rows({one, zero, zero, zero}, {zero, one, zero, zero});
    const auto r = check_theorem1_conditions(bc);
    CHECK_FALSE(r.satisfied);
    CHECK(r.degrees.at("J14").is_negative_infinity());
    CHECK(r.degrees.at("J32").is_negative_infinity());
  }
}

TEST_CASE("quadratic condition check") {
  SUBCASE("factored square") {
    const auto r = check_theorem2_conditions(factored_square());
    CHECK(r.satisfied);
    CHECK(r.degrees.at("J03") == Degree(0));
    CHECK(r.degrees.at("J12") == Degree(0));
    CHECK(r.removals == 0);
  }
  SUBCASE("high-degree coefficients elsewhere") {
    QuadraticBC q;
    q.rows[0][0] = cst(1.0);
    q.rows[1][3] = kLambda * kLambda;
    q.rows[0][1] = kLambda * kLambda * kLambda;
    q.rows[1][2] = cst(1.0);
    const auto r = check_theorem2_conditions(q);
    CHECK_FALSE(r.satisfied);
    CHECK(r.max_degree == Degree(3));
    CHECK(r.degrees.at("J03") == Degree(2));
  }
}

TEST_CASE("characteristic function closed forms") {
  SUBCASE("all-ones separated conditions: 2i sin(lambda)") {
    const CharContext ctx(SystemSpec{}, all_ones(), grid(129));
    for (int trial = 0; trial < 10; ++trial) {
      const Complex l = random_complex(10.0, 2.0);
      CHECK(rel(ctx.evaluate(l).value, 2.0 * kI * std::sin(l)) < 1e-12);
    }
  }
  SUBCASE("factored square: 16 sin^4(lambda / 2)") {
    const CharContext ctx(SystemSpec{}, factored_square(), grid(129));
    for (int trial = 0; trial < 10; ++trial) {
      const Complex l = random_complex(10.0, 2.0);
      const Complex s = std::sin(0.5 * l);
      CHECK(rel(ctx.evaluate(l).value, 16.0 * s * s * s * s) < 1e-10);
    }
  }
  SUBCASE("quadratic form agrees with the Sylvester determinant") {
    const CharContext ctx(trig_potential(), factored_square(), grid(257));
    for (int trial = 0; trial < 10; ++trial) {
      const Complex l = random_complex(8.0, 1.5);
      const CharValue v = ctx.evaluate(l);
      CHECK(std::abs(v.value - eval_char_quadratic_sylvester(ctx, l)) < 1e-10 * v.scale);
    }
  }
  SUBCASE("separated form agrees with its linear embedding") {
    const auto sbc = SeparatedBC::make(ComplexPolynomial{1.0, 1.0}, ComplexPolynomial{2.0, 1.0}, cst(1.0), cst(3.0));
    const CharContext sep(trig_potential(), sbc, grid(257));
    const CharContext lin(trig_potential(), sbc.to_linear(), grid(257));
    for (int trial = 0; trial < 10; ++trial) {
      const Complex l = random_complex(8.0, 1.5);
      const CharValue v = sep.evaluate(l);
      CHECK(std::abs(v.value - lin.evaluate(l).value) < 1e-10 * v.scale);
    }
  }
  SUBCASE("the minor expansion agrees with det Q") {
    LinearBC bc;
    for (auto& row : bc.rows)
      for (auto& p : row) p = random_polynomial(1);
    const CharContext ctx(trig_potential(), bc, grid(257));
    for (int trial = 0; trial < 10; ++trial) {
      const Complex l = random_complex(8.0, 1.5);
      const CharValue v = ctx.evaluate(l);
      CHECK(std::abs(v.value - char_minor_expansion(ctx, l)) < 1e-9 * v.scale);
    }
  }
}

TEST_CASE("chi is analytic") {
  const CharContext ctx(trig_potential(), all_ones(), grid(513));
  const double h = 1e-5;
  for (int trial = 0; trial < 5; ++trial) {
    const Complex l = random_complex(6.0, 1.0);
    const Complex dx = (ctx.evaluate(l + h).value - ctx.evaluate(l - h).value) / (2.0 * h);
    const Complex dy = (ctx.evaluate(l + kI * h).value - ctx.evaluate(l - kI * h).value) / (2.0 * kI * h);
    CHECK(std::abs(dx - dy) < 1e-6 * std::max(1.0, std::abs(dx)));
  }
}

TEST_CASE("quadratic boundary forms share a root exactly at eigenvalues") {
  const CharContext ctx(SystemSpec{}, factored_square(), grid(129));
  auto forms = [&](Complex l) {
    const auto q = quadratic_q(factored_square(), ctx.endpoints(l));
    return std::vector<ComplexPolynomial>{ComplexPolynomial{q[0], q[1], q[2]}, ComplexPolynomial{q[3], q[4], q[5]}};
  };
  const auto at_2pi = forms(2.0 * kPi);
  const auto common = common_roots(at_2pi, 1e-8, 1e-6);
  REQUIRE(common.size() == 1);
  CHECK(std::abs(common[0] + 1.0) < 1e-6);

  const auto at_pi = forms(kPi);
  CHECK(common_roots(at_pi).empty());
  CHECK(normalized_resultant(at_pi[0], at_pi[1]) > 1e-3);
}

TEST_CASE("asymptote") {
  const CharContext ctx(SystemSpec{}, all_ones(), grid(129));
  // 2i sin(lambda) = e^{-i lambda} - e^{i lambda} up to the sign of the terms.
  const Complex up{1.0, 8.0}, down{1.0, -8.0};
  CHECK(rel(char_asymptote(ctx, up).prediction, ctx.evaluate(up).value) < 1e-6);
  CHECK(rel(char_asymptote(ctx, down).prediction, ctx.evaluate(down).value) < 1e-6);
  CHECK_THROWS_AS(char_asymptote(ctx, Complex(3.0, 0.0)), SpecError);
  CHECK_THROWS_AS(char_asymptote(ctx, Complex(3.0, 1.0)), SpecError);

  const CharContext smooth(trig_potential(), all_ones(), grid(513));
  const Complex far{2.0, 30.0};
  CHECK(rel(char_asymptote(smooth, far).prediction, smooth.evaluate(far).value) < 0.1);
}

TEST_CASE("endpoint cache") {
  const CharContext ctx(trig_potential(), all_ones(), grid(257));
  const Complex l{2.0, 0.5};
  const Complex first = ctx.evaluate(l).value;
  const std::size_t size = ctx.cache_size();
  CHECK(size >= 1);
  CHECK(ctx.evaluate(l).value == first);
  CHECK(ctx.cache_size() == size);

  CharContext uncached(trig_potential(), all_ones(), grid(257));
  uncached.set_cache_enabled(false);
  CHECK(uncached.evaluate(l).value == first);
  CHECK(uncached.cache_size() == 0);
}

TEST_CASE("jets of chi") {
  const CharContext ctx(SystemSpec{}, all_ones(), grid(129));
  const Complex l{1.0, 0.3};
  const ComplexJet j = ctx.evaluate_jet(l, 3);
  // 2i sin: derivatives cycle cos, -sin, -cos
  CHECK(rel(j[0], 2.0 * kI * std::sin(l)) < 1e-12);
  CHECK(rel(j[1], 2.0 * kI * std::cos(l)) < 1e-12);
  CHECK(rel(j[2], -kI * std::sin(l)) < 1e-12);
  CHECK(rel(j[3], -2.0 * kI * std::cos(l) / 6.0) < 1e-12);
}

TEST_CASE("leading ratio pairings") {
  const auto sbc = SeparatedBC::make(ComplexPolynomial{1.0, 2.0}, ComplexPolynomial{0.0, 3.0}, cst(5.0), cst(7.0));
  const auto r = leading_ratio(sbc);
  CHECK(rel(r.derived, 2.0 * 7.0 / (3.0 * 5.0)) < 1e-15);
  CHECK(rel(r.stated, 2.0 * 5.0 / (3.0 * 7.0)) < 1e-15);
}
