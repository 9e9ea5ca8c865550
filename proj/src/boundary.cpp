#include "dirac/boundary.hpp"

namespace dirac {

namespace {

template <std::size_t C>
Degree max_degree_of(const std::array<std::array<ComplexPolynomial, C>, 2>& rows) {
  Degree d = Degree::negative_infinity();
  for (const auto& row : rows)
    for (const auto& p : row) d = max(d, p.degree());
  return d;
}

constexpr double kCoprimeThreshold = 1e-10;

template <std::size_t C>
RankReport rank_report(const std::array<std::array<ComplexPolynomial, C>, 2>& rows) {
  const auto minors = column_minors(rows);
  if (all_zero(minors)) return RankReport{false, Complex(0.0)};
  const auto shared = common_roots(minors);
  if (shared.empty()) return RankReport{true, std::nullopt};
  return RankReport{false, shared.front()};
}

}  // namespace

Degree LinearBC::max_degree() const { return max_degree_of(rows); }
Degree QuadraticBC::max_degree() const { return max_degree_of(rows); }

SeparatedBC SeparatedBC::make(ComplexPolynomial p11, ComplexPolynomial p12, ComplexPolynomial p21,
                              ComplexPolynomial p22) {
  for (const auto* p : {&p11, &p12, &p21, &p22}) {
    if (p->is_zero()) throw SpecError("separated boundary polynomials must be nonzero");
    for (Eigen::Index k = 0; k < p->size(); ++k) require_finite(p->coefficient(k), "polynomial coefficient");
  }
  if (p11.degree() != p12.degree()) throw SpecError("deg p11 must equal deg p12");
  if (p21.degree() != p22.degree()) throw SpecError("deg p21 must equal deg p22");
  if (normalized_resultant(p11, p12) <= kCoprimeThreshold) throw SpecError("p11 and p12 must be coprime");
  if (normalized_resultant(p21, p22) <= kCoprimeThreshold) throw SpecError("p21 and p22 must be coprime");
  return SeparatedBC(std::move(p11), std::move(p12), std::move(p21), std::move(p22));
}

LinearBC SeparatedBC::to_linear() const {
  LinearBC bc;
  bc.rows[0] = {p11_, p12_, ComplexPolynomial(), ComplexPolynomial()};
  bc.rows[1] = {ComplexPolynomial(), ComplexPolynomial(), p21_, p22_};
  return bc;
}

std::optional<SeparatedBC> SeparatedBC::from_linear(const LinearBC& bc) {
  if (!bc.rows[0][2].is_zero() || !bc.rows[0][3].is_zero() || !bc.rows[1][0].is_zero() || !bc.rows[1][1].is_zero())
    return std::nullopt;
  try {
    return make(bc.rows[0][0], bc.rows[0][1], bc.rows[1][2], bc.rows[1][3]);
  } catch (const SpecError&) {
    return std::nullopt;
  }
}

RankReport check_rank2(const LinearBC& bc) { return rank_report(bc.rows); }
RankReport check_rank2(const QuadraticBC& bc) { return rank_report(bc.rows); }

}  // namespace dirac
