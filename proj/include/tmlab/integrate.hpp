#pragma once

#include <limits>

#include "tmlab/model.hpp"

namespace tmlab {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Upper bound on the Taylor startup radius. The radius actually used is
  /// min(startup_radius, 1e-3 * natural length scale at the origin).
  double startup_radius = 1e-6;
  /// Integration stops with NoZeroError past this radius. Hyperbolic problems
  /// are additionally capped halfway between the boundary and r = 1.
  double max_radius = std::numeric_limits<double>::infinity();
  long max_steps = 200000;
  double alpha_cap = 8.0;
  bool allow_large_alpha = false;

  void validate() const;
};

struct StartupValue {
  double r0 = 0.0;
  double u = 0.0;
  double du = 0.0;
  StartupSeries series;
};

/// Even expansion at the regular singular point r = 0, through order r^4.
/// Throws RangeError when f(alpha) is not representable.
StartupValue taylor_startup(const ProblemSpec& problem, double lambda, double alpha, double r0);

/// Startup radius that integrate_ivp uses for these arguments.
double startup_radius_for(const ProblemSpec& problem, double lambda, double alpha,
                          const IntegratorConfig& config);

/// Integrates -(r u')' - s r w u = lambda r w f(u), u(0) = alpha, u'(0) = 0 with the
/// four integral accumulators, up to the first zero of u.
RadialSolution integrate_ivp(const ProblemSpec& problem, double lambda, double alpha,
                             const IntegratorConfig& config = {});

/// Dense evaluation on [0, boundary_radius]. Exact at stored nodes.
State evaluate_dense(const RadialSolution& solution, double r);

/// u''(r) from the derivative of the dense u' interpolant.
double evaluate_second_derivative(const RadialSolution& solution, double r);

/// max over step midpoints of |(r u')' + r w (lambda f(u) + s u)| / (lambda r w |f(u)| + s r w |u| + 1),
/// with the midpoint state and derivative from quintic Hermite interpolation of the nodes.
double defining_residual(const RadialSolution& solution);

/// Post-hoc Gauss-Legendre quadrature of 2 pi int (u')^2 r dr over the dense
/// trajectory; cross-check for the Dirichlet accumulator.
double dirichlet_quadrature(const RadialSolution& solution);

}  // namespace tmlab
