#include "dirac/charfn.hpp"

#include <cmath>

namespace dirac {

namespace {

constexpr std::size_t kCacheLimit = 200000;

// Magnitude arithmetic: a - b bounds like a + b, so evaluating a formula in
// Mag gives the size of its largest contributions.
struct Mag {
  double v = 0.0;
};
Mag operator+(Mag a, Mag b) { return {a.v + b.v}; }
Mag operator-(Mag a, Mag b) { return {a.v + b.v}; }
Mag operator*(Mag a, Mag b) { return {a.v * b.v}; }

template <typename T>
struct Point {
  T phi1, phi2, psi1, psi2;
};

struct ValueLift {
  Complex lambda;
  Complex poly(const ComplexPolynomial& p) const { return p(lambda); }
  Point<Complex> point(const std::vector<Eigen::Matrix2cd>& m) const {
    return {m[0](0, 0), m[0](1, 0), m[0](0, 1), m[0](1, 1)};
  }
};

struct JetLift {
  Complex lambda;
  int order;
  ComplexJet poly(const ComplexPolynomial& p) const { return ComplexJet::of(p, lambda, order); }
  Point<ComplexJet> point(const std::vector<Eigen::Matrix2cd>& m) const {
    auto jet = [&](int r, int c) {
      std::vector<Complex> coeffs(static_cast<std::size_t>(order) + 1);
      for (int k = 0; k <= order; ++k) coeffs[static_cast<std::size_t>(k)] = m[static_cast<std::size_t>(k)](r, c);
      return ComplexJet(std::move(coeffs));
    };
    return {jet(0, 0), jet(1, 0), jet(0, 1), jet(1, 1)};
  }
};

struct MagLift {
  Complex lambda;
  Mag poly(const ComplexPolynomial& p) const {
    double s = 0.0, power = 1.0;
    for (Eigen::Index k = 0; k < p.size(); ++k, power *= std::abs(lambda)) s += std::abs(p.coefficient(k)) * power;
    return {s};
  }
  Point<Mag> point(const std::vector<Eigen::Matrix2cd>& m) const {
    return {{std::abs(m[0](0, 0))}, {std::abs(m[0](1, 0))}, {std::abs(m[0](0, 1))}, {std::abs(m[0](1, 1))}};
  }
};

template <typename T, typename Lift>
std::array<T, 4> linear_q_t(const LinearBC& bc, const Point<T>& e, const Lift& lift) {
  auto P = [&](int i, int j) { return lift.poly(bc.P(i, j)); };
  return {P(1, 1) + P(1, 3) * e.phi1 + P(1, 4) * e.phi2, P(1, 2) + P(1, 3) * e.psi1 + P(1, 4) * e.psi2,
          P(2, 1) + P(2, 3) * e.phi1 + P(2, 4) * e.phi2, P(2, 2) + P(2, 3) * e.psi1 + P(2, 4) * e.psi2};
}

template <typename T, typename Lift>
std::array<T, 3> quadratic_row(const QuadraticBC& bc, int r, const Point<T>& e, const Lift& lift) {
  auto P = [&](int j) { return lift.poly(bc.P(r, j)); };
  const T q1 = P(0) + P(2) * e.phi1 * e.phi1 + P(3) * e.phi2 * e.phi2 + P(5) * e.phi1 + P(6) * e.phi2 +
               P(9) * e.phi1 * e.phi2;
  const T p2 = P(2) * e.phi1 * e.psi1, p3 = P(3) * e.phi2 * e.psi2;
  const T q2 = p2 + p2 + p3 + p3 + P(4) + P(5) * e.psi1 + P(6) * e.psi2 + P(7) * e.phi1 + P(8) * e.phi2 +
               P(9) * (e.phi1 * e.psi2 + e.psi1 * e.phi2);
  const T q3 = P(1) + P(2) * e.psi1 * e.psi1 + P(3) * e.psi2 * e.psi2 + P(7) * e.psi1 + P(8) * e.psi2 +
               P(9) * e.psi1 * e.psi2;
  return {q1, q2, q3};
}

template <typename T, typename Lift>
T char_linear_t(const LinearBC& bc, const Point<T>& e, const Lift& lift) {
  const auto q = linear_q_t(bc, e, lift);
  return q[0] * q[3] - q[1] * q[2];
}

template <typename T, typename Lift>
T char_quadratic_t(const QuadraticBC& bc, const Point<T>& e, const Lift& lift) {
  const auto r1 = quadratic_row(bc, 1, e, lift), r2 = quadratic_row(bc, 2, e, lift);
  const T d12 = r1[0] * r2[1] - r1[1] * r2[0];
  const T d13 = r1[0] * r2[2] - r1[2] * r2[0];
  const T d23 = r1[1] * r2[2] - r1[2] * r2[1];
  return d13 * d13 - d12 * d23;
}

template <typename T, typename Lift>
T char_separated_t(const SeparatedBC& bc, const Point<T>& e, const Lift& lift) {
  const T p11 = lift.poly(bc.p11()), p12 = lift.poly(bc.p12());
  const T p21 = lift.poly(bc.p21()), p22 = lift.poly(bc.p22());
  return p11 * (p21 * e.psi1 + p22 * e.psi2) - p12 * (p21 * e.phi1 + p22 * e.phi2);
}

template <typename Lift>
auto char_dispatch(const BoundarySpec& bc, const EndpointData& e, const Lift& lift) {
  return std::visit(
      [&](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, LinearBC>) return char_linear_t(b, lift.point(e.one), lift);
        else if constexpr (std::is_same_v<B, QuadraticBC>) return char_quadratic_t(b, lift.point(e.half), lift);
        else return char_separated_t(b, lift.point(e.one), lift);
      },
      bc);
}

std::string minor_name(int i, int j) { return "J" + std::to_string(i) + std::to_string(j); }

template <typename Bc>
const Bc& require_bc(const CharContext& ctx, const char* what) {
  const auto* bc = std::get_if<Bc>(&ctx.bc());
  if (bc == nullptr) throw SpecError(std::string(what) + " requires a matching boundary type");
  return *bc;
}

}  // namespace

MinorTable::MinorTable(int first_index, int columns)
    : first_(first_index), columns_(columns), j_(static_cast<std::size_t>(columns * columns)) {}

std::size_t MinorTable::slot(int i, int j) const {
  const int a = i - first_, b = j - first_;
  if (a < 0 || b < 0 || a >= columns_ || b >= columns_) throw SpecError("minor index out of range");
  return static_cast<std::size_t>(a * columns_ + b);
}

void MinorTable::set(int i, int j, const ComplexPolynomial& p) {
  j_[slot(i, j)] = p;
  j_[slot(j, i)] = -p;
}

MinorTable minors(const LinearBC& bc) {
  MinorTable t(1, 4);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) t.set(i, j, cross_difference(bc.P(1, i), bc.P(2, j), bc.P(1, j), bc.P(2, i)));
  return t;
}

MinorTable minors(const QuadraticBC& bc) {
  MinorTable t(0, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) t.set(i, j, cross_difference(bc.P(1, i), bc.P(2, j), bc.P(1, j), bc.P(2, i)));
  return t;
}

ConditionReport check_theorem1_conditions(const LinearBC& bc) {
  ConditionReport r;
  const RankReport rank = check_rank2(bc);
  r.rank_ok = rank.full_rank;
  r.rank_witness = rank.witness;
  const MinorTable j = minors(bc);
  r.max_degree = bc.max_degree();
  for (auto [a, b] : {std::pair{1, 4}, {3, 2}, {1, 3}, {4, 2}}) r.degrees.emplace(minor_name(a, b), j(a, b).degree());

  const Degree d14 = r.degrees.at("J14"), d32 = r.degrees.at("J32");
  const Degree rhs = max(max(r.degrees.at("J13"), r.degrees.at("J42")), r.max_degree);
  if (!r.rank_ok) r.message = "rank of the boundary matrix drops at lambda = witness";
  else if (d14.is_negative_infinity()) r.message = "J14 vanishes identically";
  else if (d14 != d32) r.message = "deg J14 = " + d14.to_string() + " differs from deg J32 = " + d32.to_string();
  else if (d14 < rhs) r.message = "deg J14 = " + d14.to_string() + " is below max{deg J13, deg J42, M} = " + rhs.to_string();
  else {
    r.satisfied = true;
    r.removals = d14.value() - r.max_degree.value();
    r.message = "satisfied";
  }
  return r;
}

ConditionReport check_theorem2_conditions(const QuadraticBC& bc) {
  ConditionReport r;
  const RankReport rank = check_rank2(bc);
  r.rank_ok = rank.full_rank;
  r.rank_witness = rank.witness;
  const MinorTable j = minors(bc);
  r.max_degree = bc.max_degree();
  const Degree d03 = j(0, 3).degree(), d12 = j(1, 2).degree(), m = r.max_degree;
  r.degrees.emplace("J03", d03);
  r.degrees.emplace("J12", d12);

  if (!r.rank_ok) r.message = "rank of the boundary matrix drops at lambda = witness";
  else if (d03.is_negative_infinity() || d12.is_negative_infinity()) r.message = "J03 or J12 vanishes identically";
  else if (d03 != m || d12 != m)
    r.message = "deg J03 = " + d03.to_string() + ", deg J12 = " + d12.to_string() + ", M = " + m.to_string();
  else {
    r.satisfied = true;
    r.removals = m.value();
    r.message = "satisfied";
  }
  return r;
}

CharContext::CharContext(SystemSpec spec, BoundarySpec bc, GridConfig grid)
    : spec_(std::move(spec)), bc_(std::move(bc)), grid_(grid), mutex_(std::make_unique<std::mutex>()) {
  validate_spec(spec_);
  validate_grid(grid_);
}

FundamentalSolution CharContext::fundamental(Complex lambda, int kmax) const {
  return solve_fundamental(spec_, 0.0, lambda, grid_, kmax);
}

EndpointData CharContext::endpoints(Complex lambda, int kmax) const {
  const auto key = std::make_tuple(lambda.real(), lambda.imag(), kmax);
  if (cache_enabled_) {
    std::lock_guard lock(*mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }

  const FundamentalSolution fs = fundamental(lambda, kmax);
  EndpointData e;
  e.lambda = lambda;
  e.kmax = kmax;
  const int mid = grid_.midpoint_node(), last = grid_.n_points - 1;
  for (int k = 0; k <= kmax; ++k) {
    e.half.push_back(fs.matrix(mid, k));
    e.one.push_back(fs.matrix(last, k));
  }
  e.wronskian_half = fs.wronskian(mid);
  e.wronskian_one = fs.wronskian(last);

  if (cache_enabled_) {
    std::lock_guard lock(*mutex_);
    if (cache_.size() >= kCacheLimit) cache_.clear();
    cache_.emplace(key, e);
  }
  return e;
}

std::size_t CharContext::cache_size() const {
  std::lock_guard lock(*mutex_);
  return cache_.size();
}

CharValue CharContext::evaluate(Complex lambda) const {
  const EndpointData e = endpoints(lambda, 0);
  CharValue v;
  v.value = char_dispatch(bc_, e, ValueLift{lambda});
  v.scale = char_dispatch(bc_, e, MagLift{lambda}).v;
  return v;
}

ComplexJet CharContext::evaluate_jet(Complex lambda, int order) const {
  return char_dispatch(bc_, endpoints(lambda, order), JetLift{lambda, order});
}

std::array<Complex, 4> linear_q(const LinearBC& bc, const EndpointData& e) {
  const ValueLift lift{e.lambda};
  return linear_q_t(bc, lift.point(e.one), lift);
}

std::array<Complex, 6> quadratic_q(const QuadraticBC& bc, const EndpointData& e) {
  const ValueLift lift{e.lambda};
  const auto r1 = quadratic_row(bc, 1, lift.point(e.half), lift);
  const auto r2 = quadratic_row(bc, 2, lift.point(e.half), lift);
  return {r1[0], r1[1], r1[2], r2[0], r2[1], r2[2]};
}

std::array<ComplexJet, 4> linear_q_jet(const LinearBC& bc, const EndpointData& e, int order) {
  if (order > e.kmax) throw SpecError("jet order exceeds the endpoint data");
  const JetLift lift{e.lambda, order};
  return linear_q_t(bc, lift.point(e.one), lift);
}

std::array<ComplexJet, 6> quadratic_q_jet(const QuadraticBC& bc, const EndpointData& e, int order) {
  if (order > e.kmax) throw SpecError("jet order exceeds the endpoint data");
  const JetLift lift{e.lambda, order};
  const auto r1 = quadratic_row(bc, 1, lift.point(e.half), lift);
  const auto r2 = quadratic_row(bc, 2, lift.point(e.half), lift);
  return {r1[0], r1[1], r1[2], r2[0], r2[1], r2[2]};
}

Complex eval_char_linear(const CharContext& ctx, Complex lambda) {
  const auto& bc = require_bc<LinearBC>(ctx, "eval_char_linear");
  const ValueLift lift{lambda};
  return char_linear_t(bc, lift.point(ctx.endpoints(lambda).one), lift);
}

Complex eval_char_quadratic(const CharContext& ctx, Complex lambda) {
  const auto& bc = require_bc<QuadraticBC>(ctx, "eval_char_quadratic");
  const ValueLift lift{lambda};
  return char_quadratic_t(bc, lift.point(ctx.endpoints(lambda).half), lift);
}

Complex eval_char_separated(const CharContext& ctx, Complex lambda) {
  const auto& bc = require_bc<SeparatedBC>(ctx, "eval_char_separated");
  const ValueLift lift{lambda};
  return char_separated_t(bc, lift.point(ctx.endpoints(lambda).one), lift);
}

Complex eval_char_quadratic_sylvester(const CharContext& ctx, Complex lambda) {
  const auto& bc = require_bc<QuadraticBC>(ctx, "eval_char_quadratic_sylvester");
  const auto q = quadratic_q(bc, ctx.endpoints(lambda));
  Eigen::Matrix4cd s;
  s << q[0], q[1], q[2], 0.0,  //
      0.0, q[0], q[1], q[2],   //
      q[3], q[4], q[5], 0.0,   //
      0.0, q[3], q[4], q[5];
  return s.determinant();
}

Complex char_minor_expansion(const CharContext& ctx, Complex lambda) {
  const auto& bc = require_bc<LinearBC>(ctx, "char_minor_expansion");
  const MinorTable j = minors(bc);
  const EndpointData e = ctx.endpoints(lambda);
  const Eigen::Matrix2cd& y = e.one[0];
  return j(1, 2)(lambda) + j(1, 3)(lambda) * y(0, 1) + j(1, 4)(lambda) * y(1, 1) + j(3, 2)(lambda) * y(0, 0) +
         j(4, 2)(lambda) * y(1, 0) + j(3, 4)(lambda) * e.wronskian_one;
}

Asymptote char_asymptote(const CharContext& ctx, Complex lambda, std::optional<double> threshold) {
  const double a = ctx.spec().a, b = ctx.spec().b;
  const double limit = threshold.value_or(5.0 / (b - a));
  if (!(std::abs(lambda.imag()) >= limit) || lambda.imag() == 0.0)
    throw SpecError("|Im lambda| must be at least " + std::to_string(limit) + " for the asymptote");
  const bool upper = lambda.imag() > 0.0;
  const Complex ea = std::exp(kI * a * lambda), eb = std::exp(kI * b * lambda);

  return std::visit(
      [&](const auto& bc) -> Asymptote {
        using B = std::decay_t<decltype(bc)>;
        if constexpr (std::is_same_v<B, LinearBC>) {
          const MinorTable j = minors(bc);
          return {upper ? j(3, 2)(lambda) * ea : j(1, 4)(lambda) * eb, ""};
        } else if constexpr (std::is_same_v<B, QuadraticBC>) {
          const MinorTable j = minors(bc);
          if (upper) {
            const Complex c = j(1, 2)(lambda);
            return {c * c * ea * ea, ""};
          }
          const Complex c = j(0, 3)(lambda);
          return {c * c * eb * eb,
                  "lower half-plane coefficient taken as J03^2 (coefficient of psi02^4); the alternative J01^2 "
                  "reading is not used"};
        } else {
          return {bc.p11()(lambda) * bc.p22()(lambda) * eb - bc.p12()(lambda) * bc.p21()(lambda) * ea, ""};
        }
      },
      ctx.bc());
}

LeadingRatio leading_ratio(const SeparatedBC& sbc) {
  return {sbc.c11() * sbc.c22() / (sbc.c12() * sbc.c21()), sbc.c11() * sbc.c21() / (sbc.c12() * sbc.c22())};
}

}  // namespace dirac
