#pragma once

#include <string>
#include <vector>

#include "tmlab/series.hpp"

namespace tmlab::series {

/// u^{(k)}(1) - t v^{(k)}(1) for two boundary expansions with slopes a and b
/// under a = t b, k = 2..6.
struct PairRelation {
  unsigned k = 0;
  MultiPoly difference;  ///< in a, b, lambda (t eliminated)
  MultiPoly printed;     ///< the closed form the uniqueness argument uses
  MultiPoly discrepancy;  ///< difference - printed
  MultiPoly quotient;     ///< difference / (a (a^2 - b^2))
  MultiPoly remainder;
  bool matches_at_unit_lambda = false;  ///< discrepancy vanishes at lambda = 1
  bool t_form_consistent = false;  ///< same result with t kept symbolic and a -> t b substituted
  bool vanishes_on_diagonal = false;  ///< difference is 0 at b = a
};

struct PairReport {
  std::vector<PairRelation> relations;
  /// Intermediate sixth-order relation D6 + D5 - 36 a (a^2 - b^2) = 0, as printed.
  MultiPoly sixth_order_residual;
  bool r1_holds = false;          ///< D2 = D3 = D4 = 0
  bool r2_matches_printed = false;
  bool t2_matches_printed = false;
};

PairReport verify_pair_relations();

/// Expansion of the difference of the two Pohozaev identities at r = 1 + eps:
/// lhs = u'(r)^2 - t^2 v'(r)^2, rhs = lambda (I + II) with
/// II = t^2 (e^{v^2} - 1) - (e^{u^2} - 1) and I = (pi r^2)^{-1} int_{B_1 \ B_r} II.
struct Certificate {
  MultiPoly common_factor;  ///< K = a^2 (a^2 - b^2)
  MultiPoly lhs_eps4, rhs_eps4, lhs_eps5, rhs_eps5;
  MultiPoly lhs_eps5_over_k, rhs_eps5_over_k;
  MultiPoly i_eps5_over_k, ii_eps5_over_k;
  bool eps4_agree = false;
  bool lower_orders_agree = false;  ///< eps^0..eps^3 agree
  bool mismatch = false;            ///< lhs_eps5 != rhs_eps5
  /// Coefficients of K as printed in the argument being checked (lambda = 1 there).
  mpq_class printed_lhs_eps5_over_k{6, 5};
  mpq_class printed_rhs_eps5_over_k{2};
  mpq_class printed_i_eps5_over_k{1};
  std::string verdict;
};

Certificate contradiction_certificate();

}  // namespace tmlab::series
