#pragma once

#include <optional>

#include "tmlab/integrate.hpp"
#include "tmlab/model.hpp"

namespace tmlab {

struct ShootResult {
  double lambda = 0.0;
  RadialSolution solution;
  int iterations = 0;
};

/// The lambda for which the solution with u(0) = alpha vanishes on the
/// boundary, together with that solution.
///
/// Scale-covariant problems integrate once with lambda = 1 and rescale the
/// trajectory. Every other problem root-finds on log(lambda) (secant with a
/// bisection fallback inside a geometrically grown bracket) until
/// |rho - R| <= 1e-10 R. `lambda_upper` bounds the bracket; when absent it is
/// derived from the first eigenvalue.
ShootResult lambda_of_alpha(const ProblemSpec& problem, double alpha,
                            const IntegratorConfig& config = {},
                            std::optional<double> lambda_upper = std::nullopt);

/// The positive solution for a prescribed lambda (theta for the shifted
/// problem), by bisection on alpha. The first-zero radius must fall
/// monotonically along the way; a violation raises MultiplicityWarning with
/// both brackets. `mu1` is computed when absent.
RadialSolution solve_for_lambda(const ProblemSpec& problem, double lambda,
                                const IntegratorConfig& config = {},
                                std::optional<double> mu1 = std::nullopt);

/// |u''(R) + u'(R)/R| / |u'(R)/R| with u''(R) taken from the equation at the
/// computed boundary point.
double boundary_slope_residual(const RadialSolution& solution);

}  // namespace tmlab
