#include "tmlab/eigen.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

constexpr double kJ0Zero = 2.404825557695773;

struct Probe {
  std::optional<RadialSolution> sol;  // empty: no zero before the cap
  double rho() const {
    return sol ? sol->boundary_radius : std::numeric_limits<double>::infinity();
  }
};

}  // namespace

EigenResult first_eigenvalue(const ProblemSpec& problem, const IntegratorConfig& config) {
  const ProblemSpec linear = problem.with_nonlinearity(Nonlinearity::linear());
  const double R = linear.boundary_radius();
  IntegratorConfig cfg = config;
  cfg.max_radius = std::min(config.max_radius, 2.0 * R);

  auto probe = [&](double mu) {
    try {
      return Probe{integrate_ivp(linear, mu, 1.0, cfg)};
    } catch (const NoZeroError&) {
      return Probe{};
    }
  };

  // The first zero moves inward as mu grows.
  double guess = kJ0Zero * kJ0Zero / (R * R * linear.weight_at_origin());
  double lo = guess, hi = guess;
  Probe p_hi = probe(hi);
  int grow = 0;
  while (!(p_hi.rho() <= R)) {
    lo = hi;
    hi *= 2.0;
    p_hi = probe(hi);
    if (++grow > 60) throw BracketError("eigenvalue bracket: no upper end found");
  }
  if (lo == hi) {
    Probe p_lo = probe(lo);
    while (p_lo.rho() <= R) {
      hi = lo;
      p_hi = std::move(p_lo);
      lo *= 0.5;
      p_lo = probe(lo);
      if (++grow > 60) throw BracketError("eigenvalue bracket: no lower end found");
    }
  }

  EigenResult out;
  while ((hi - lo) > 1e-13 * hi && out.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    Probe pm = probe(mid);
    if (pm.rho() <= R) {
      hi = mid;
      p_hi = std::move(pm);
    } else {
      lo = mid;
    }
    ++out.iterations;
  }
  out.mu1 = 0.5 * (lo + hi);
  out.profile = std::move(*p_hi.sol);
  return out;
}

double admissible_lambda_upper(const ProblemSpec& problem, double mu1) {
  switch (problem.kind()) {
    case NonlinearityKind::Perturbed:
      return std::numeric_limits<double>::infinity();
    case NonlinearityKind::Shifted:
      return (mu1 - problem.lambda_shift()) * (1.0 - 1e-9);
    default:
      return mu1 * (1.0 - 1e-9);
  }
}

}  // namespace tmlab
