#pragma once

#include "tmlab/integrate.hpp"
#include "tmlab/model.hpp"

namespace tmlab {

struct EigenResult {
  double mu1 = 0.0;
  /// Normalised phi(0) = 1, integrated with lambda = mu1 on the linear problem.
  RadialSolution profile;
  int iterations = 0;
};

/// First Dirichlet eigenvalue of -(r phi')' = mu r w(r) phi on [0, boundary_radius],
/// by bisection on mu until the first zero of phi sits on the boundary.
/// Converges to 1e-10 relative or better. Any shift in the problem is ignored.
EigenResult first_eigenvalue(const ProblemSpec& problem, const IntegratorConfig& config = {});

/// Upper end of the admissible lambda range: mu1 (1 - 1e-9), minus the shift
/// for shifted problems; +inf for the perturbed nonlinearity, which has no
/// linear part at u = 0.
double admissible_lambda_upper(const ProblemSpec& problem, double mu1);

}  // namespace tmlab
