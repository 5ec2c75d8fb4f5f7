#include "tmlab/proof.hpp"

#include <stdexcept>

namespace tmlab::series {

namespace {

constexpr unsigned kOrder = 6;

MultiPoly sym(Symbol s, unsigned p = 1) { return MultiPoly::symbol(s, p); }

MultiPoly exact_quotient(const MultiPoly& p, const MultiPoly& d) {
  auto div = p.divide(d);
  if (!div.remainder.is_zero())
    throw std::logic_error("expected exact division by " + d.str() + ", remainder " +
                           div.remainder.str());
  return div.quotient;
}

// a (a^2 - b^2)
MultiPoly cubic_factor() { return sym(kA) * (sym(kA, 2) - sym(kB, 2)); }

}  // namespace

PairReport verify_pair_relations() {
  const auto pa = boundary_recurrence(kOrder, NonlinearityKind::Standard, kA);
  const auto pb = boundary_recurrence(kOrder, NonlinearityKind::Standard, kB);
  const MultiPoly a = sym(kA), b = sym(kB), t = sym(kT);
  const MultiPoly f = cubic_factor();

  PairReport rep;
  for (unsigned k = 2; k <= kOrder; ++k) {
    PairRelation rel;
    rel.k = k;
    // b (u^(k) - t v^(k)) = b u^(k) - a v^(k) once t = a/b.
    rel.difference = exact_quotient(b * pa[k] - a * pb[k], b);
    if (k == 5) rel.printed = MultiPoly(-6) * f;
    if (k == 6) rel.printed = MultiPoly(42) * f;
    rel.discrepancy = rel.difference - rel.printed;
    rel.matches_at_unit_lambda = rel.discrepancy.substitute(kLambda, 1).is_zero();
    auto div = rel.difference.divide(f);
    rel.quotient = div.quotient;
    rel.remainder = div.remainder;

    const MultiPoly t_form = (pa[k] - t * pb[k]).substitute(kA, t * b);
    rel.t_form_consistent = t_form == rel.difference.substitute(kA, t * b);
    rel.vanishes_on_diagonal = rel.difference.substitute(kB, a).is_zero();
    rep.relations.push_back(std::move(rel));
  }
  const auto& d = rep.relations;
  rep.r1_holds = d[0].difference.is_zero() && d[1].difference.is_zero() && d[2].difference.is_zero();
  rep.r2_matches_printed = d[3].discrepancy.is_zero();
  rep.t2_matches_printed = d[4].discrepancy.is_zero();
  // With u'' = -a, v'' = -b and a = t b: 36 (a^2 u'' - t b^2 v'') = -36 a (a^2 - b^2).
  rep.sixth_order_residual = d[4].difference + d[3].difference - MultiPoly(36) * f;
  return rep;
}

Certificate contradiction_certificate() {
  const MultiPoly a2 = sym(kA, 2), b2 = sym(kB, 2);
  const SeriesPoly u = boundary_series(kOrder, NonlinearityKind::Standard, kA);
  const SeriesPoly v = boundary_series(kOrder, NonlinearityKind::Standard, kB);
  const SeriesPoly du = u.derivative(), dv = v.derivative();

  // Everything below is multiplied by b^2 so that t^2 = a^2 / b^2 stays polynomial.
  auto expm1 = [](const SeriesPoly& s) {
    SeriesPoly e = (s * s).truncated(s.order()).exp();
    e[0] -= 1;
    return e;
  };
  SeriesPoly lhs = b2 * (du * du) - a2 * (dv * dv);
  SeriesPoly ii = a2 * expm1(v) - b2 * expm1(u);
  auto unscale = [&](SeriesPoly s) {
    for (unsigned k = 0; k <= s.order(); ++k) s[k] = exact_quotient(s[k], b2);
    return s;
  };
  lhs = unscale(lhs);
  ii = unscale(ii).truncated(5);

  // I(eps) = 2 / (1+eps)^2 int_{1+eps}^1 s II ds = -2 (1+eps)^{-2} int_0^eps (1+s) II ds.
  const SeriesPoly one_plus = SeriesPoly::one_plus_eps_power(1, 6);
  const SeriesPoly h = (one_plus * ii).integral();
  const SeriesPoly i_term = MultiPoly(-2) * (SeriesPoly::one_plus_eps_power(-2, 6) * h);
  const SeriesPoly rhs = sym(kLambda) * (i_term + ii);

  Certificate c;
  c.common_factor = a2 * (a2 - b2);
  c.lhs_eps4 = lhs[4];
  c.rhs_eps4 = rhs[4];
  c.lhs_eps5 = lhs[5];
  c.rhs_eps5 = rhs[5];
  c.lhs_eps5_over_k = exact_quotient(lhs[5], c.common_factor);
  c.rhs_eps5_over_k = exact_quotient(rhs[5], c.common_factor);
  c.i_eps5_over_k = exact_quotient(i_term[5], c.common_factor);
  c.ii_eps5_over_k = exact_quotient(ii[5], c.common_factor);
  c.eps4_agree = lhs[4] == rhs[4];
  c.lower_orders_agree = true;
  for (unsigned k = 0; k < 4; ++k) c.lower_orders_agree = c.lower_orders_agree && lhs[k] == rhs[k];
  c.mismatch = !(lhs[5] == rhs[5]);
  if (!c.mismatch) {
    c.verdict = "no contradiction: eps^5 coefficients agree identically";
  } else if ((lhs[5] - rhs[5]).divide(c.common_factor).remainder.is_zero()) {
    c.verdict = "contradiction unless a^2=b^2";
  } else {
    c.verdict = "eps^5 coefficients differ by a term not proportional to a^2(a^2-b^2)";
  }
  return c;
}

}  // namespace tmlab::series
