#pragma once

#include <string>
#include <vector>

#include "tmlab/model.hpp"

namespace tmlab {

inline constexpr double kIdentityTolerance = 1e-8;

/// pi r^2 u'(r)^2 - lambda M(r) - s U(r) + pi r^2 (lambda 2F(u(r)) + s u(r)^2), where M
/// and U are the mass and u^2 accumulators, normalised by the largest term.
/// Euclidean problems only; throws UnsupportedIdentity otherwise.
ResidualReport pohozaev_residual(const RadialSolution& solution, const std::vector<double>& radii);

/// Dirichlet(R) - s U(R) - lambda N(R) relative to the largest term.
ResidualReport nehari_residual(const RadialSolution& solution);

/// Both residuals at the boundary. Pohozaev is NaN on hyperbolic problems.
ResidualSummary residual_summary(const RadialSolution& solution);

struct BoundaryDerivatives {
  /// values[k] = u^{(k)}(R) for k = 0..order.
  std::vector<double> values;
  /// One-sided finite differences of the dense u' for k = 2, 3.
  double fd_second = 0.0;
  double fd_third = 0.0;
  double fd_rel_second = 0.0;
  double fd_rel_third = 0.0;
  bool flagged = false;  ///< either cross-check above 1e-4 relative
};

/// u^{(k)} at the boundary from the exact boundary recurrence, seeded with
/// the computed u'(R). Euclidean standard, perturbed or linear problems;
/// order <= 6.
BoundaryDerivatives boundary_derivatives(const RadialSolution& solution, int order = 6);

struct ComparisonReport {
  double alpha_lo = 0.0;  ///< u(0), the solution with the smaller value at the origin
  double alpha_hi = 0.0;  ///< v(0), the other one
  int intersections = 0;  ///< sign changes of u - v on (0, 1)
  std::vector<double> crossing_x;
  /// x -> u(x)/v(x) on the normalised grid: number of sign changes of its increments.
  int ratio_turns = 0;
  bool ratio_increasing = false;
  bool ratio_decreasing = false;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  /// t = [max v/u]^{-1} = min u/v, so that w = u - t v >= 0 touches zero at
  /// xi. Contact case: 'a' at the origin, 'b' interior, 'c' at x = 1.
  double t = 0.0;
  double xi = 0.0;
  char contact_case = '?';
};

/// Observations on two branch solutions mapped to the unit disc. Diagnostic
/// only; nothing here is asserted.
ComparisonReport comparison_diagnostics(const RadialSolution& a, const RadialSolution& b,
                                        int samples = 4000);

}  // namespace tmlab
