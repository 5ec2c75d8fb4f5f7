#include "tmlab/shoot.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tmlab/eigen.hpp"
#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambdaFloor = 1e-12;
constexpr double kBoundaryTol = 1e-10;

struct Probe {
  std::optional<RadialSolution> sol;
  double rho() const { return sol ? sol->boundary_radius : kInf; }
};

Probe probe(const ProblemSpec& problem, double lambda, double alpha, const IntegratorConfig& cfg) {
  try {
    return Probe{integrate_ivp(problem, lambda, alpha, cfg)};
  } catch (const NoZeroError&) {
    return Probe{};
  }
}

IntegratorConfig search_config(const ProblemSpec& problem, const IntegratorConfig& config) {
  IntegratorConfig cfg = config;
  if (problem.is_euclidean())
    cfg.max_radius = std::min(config.max_radius, 4.0 * problem.boundary_radius());
  return cfg;
}

ShootResult lambda_by_scaling(const ProblemSpec& problem, double alpha,
                              const IntegratorConfig& config) {
  RadialSolution raw = integrate_ivp(problem, 1.0, alpha, config);
  const double R = problem.boundary_radius();
  const double rho = raw.boundary_radius;
  RadialSolution sol = raw.rescaled(R / rho);
  sol.lambda = (rho / R) * (rho / R);
  sol.boundary_radius = R;
  sol.grid.back() = R;
  return {sol.lambda, std::move(sol), 1};
}

ShootResult lambda_by_root_finding(const ProblemSpec& problem, double alpha,
                                   const IntegratorConfig& config, double upper) {
  const double R = problem.boundary_radius();
  const IntegratorConfig cfg = search_config(problem, config);
  int evals = 0;

  // g = log(rho / R); +inf when no zero was found before the cap.
  auto eval = [&](double log_lambda) {
    ++evals;
    Probe p = probe(problem, std::exp(log_lambda), alpha, cfg);
    const double g = p.sol ? std::log(p.rho() / R) : kInf;
    return std::pair<double, Probe>{g, std::move(p)};
  };
  auto converged = [&](const Probe& p) {
    return p.sol && std::abs(p.rho() - R) <= kBoundaryTol * R;
  };

  const double log_floor = std::log(kLambdaFloor);
  const double log_upper = std::isfinite(upper) ? std::log(upper) : std::log(1e12);
  double start = std::min(1.0, 0.5 * std::exp(log_upper));
  // Weight at the origin shifts the natural scale; start near the Euclidean estimate.
  start = std::min(start, 1.0 / (R * R * problem.weight_at_origin()));
  double x = std::log(start);
  auto [g, p] = eval(x);
  if (converged(p)) return {std::exp(x), std::move(*p.sol), evals};

  // Bracket [x_lo, x_hi] with g(x_lo) > 0 > g(x_hi); rho shrinks as lambda grows.
  double x_lo, g_lo, x_hi, g_hi;
  Probe p_hi;
  const double step = std::log(4.0);
  if (g > 0.0) {
    x_lo = x;
    g_lo = g;
    for (;;) {
      double xn = std::min(x_lo + step, log_upper);
      if (xn <= x_lo) throw BracketError("lambda bracket: no upper end below the admissible bound");
      auto [gn, pn] = eval(xn);
      if (converged(pn)) return {std::exp(xn), std::move(*pn.sol), evals};
      if (gn < 0.0) {
        x_hi = xn;
        g_hi = gn;
        p_hi = std::move(pn);
        break;
      }
      x_lo = xn;
      g_lo = gn;
    }
  } else {
    x_hi = x;
    g_hi = g;
    p_hi = std::move(p);
    for (;;) {
      double xn = std::max(x_hi - step, log_floor);
      if (xn >= x_hi) throw BracketError("lambda bracket: no lower end above the floor");
      auto [gn, pn] = eval(xn);
      if (converged(pn)) return {std::exp(xn), std::move(*pn.sol), evals};
      if (gn > 0.0) {
        x_lo = xn;
        g_lo = gn;
        break;
      }
      x_hi = xn;
      g_hi = gn;
      p_hi = std::move(pn);
    }
  }

  // Illinois-modified regula falsi; plain bisection while g_lo is infinite.
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double xn;
    if (std::isfinite(g_lo)) {
      xn = x_hi - g_hi * (x_hi - x_lo) / (g_hi - g_lo);
      if (!(xn > x_lo && xn < x_hi)) xn = 0.5 * (x_lo + x_hi);
    } else {
      xn = 0.5 * (x_lo + x_hi);
    }
    auto [gn, pn] = eval(xn);
    if (converged(pn)) return {std::exp(xn), std::move(*pn.sol), evals};
    if (gn > 0.0) {
      x_lo = xn;
      g_lo = gn;
      if (side == -1 && std::isfinite(g_hi)) g_hi *= 0.5;
      side = -1;
    } else {
      x_hi = xn;
      g_hi = gn;
      p_hi = std::move(pn);
      if (side == 1 && std::isfinite(g_lo)) g_lo *= 0.5;
      side = 1;
    }
    if (x_hi - x_lo < 1e-15 * std::max(1.0, std::abs(x_hi))) break;
  }
  if (p_hi.sol && std::abs(p_hi.rho() - R) <= 1e-8 * R)
    throw StagnationError("lambda root-finder stalled short of the boundary tolerance");
  throw StagnationError("lambda root-finder failed to converge");
}

}  // namespace

ShootResult lambda_of_alpha(const ProblemSpec& problem, double alpha,
                            const IntegratorConfig& config, std::optional<double> lambda_upper) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (problem.scale_covariant()) return lambda_by_scaling(problem, alpha, config);
  double upper = kInf;
  if (lambda_upper) {
    upper = *lambda_upper;
  } else if (problem.kind() != NonlinearityKind::Perturbed) {
    const double mu1 = first_eigenvalue(problem, config).mu1;
    check_shift_admissible(problem, mu1);
    upper = admissible_lambda_upper(problem, mu1);
  }
  return lambda_by_root_finding(problem, alpha, config, upper);
}

RadialSolution solve_for_lambda(const ProblemSpec& problem, double lambda,
                                const IntegratorConfig& config, std::optional<double> mu1) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
  if (problem.kind() != NonlinearityKind::Perturbed) {
    const double m = mu1 ? *mu1 : first_eigenvalue(problem, config).mu1;
    check_shift_admissible(problem, m);
    const double upper = admissible_lambda_upper(problem, m);
    if (!(lambda < upper)) {
      std::ostringstream os;
      os.precision(17);
      os << "lambda=" << lambda << " outside (0, " << upper << "): no positive solution";
      throw ValidationError(os.str());
    }
  }
  const double R = problem.boundary_radius();
  const IntegratorConfig cfg = search_config(problem, config);

  double a_lo = 0.5, a_hi = 1.0;
  Probe p_lo = probe(problem, lambda, a_lo, cfg);
  while (p_lo.rho() <= R) {
    a_lo *= 0.25;
    if (a_lo < 1e-10) throw BracketError("alpha bracket: no lower end");
    p_lo = probe(problem, lambda, a_lo, cfg);
  }
  a_hi = std::max(a_hi, a_lo);
  Probe p_hi = probe(problem, lambda, a_hi, cfg);
  while (!(p_hi.rho() < R)) {
    if (p_hi.rho() < p_lo.rho() || (std::isinf(p_hi.rho()) && std::isinf(p_lo.rho()))) {
      a_lo = a_hi;
      p_lo = std::move(p_hi);
    }
    if (a_hi >= config.alpha_cap && !config.allow_large_alpha)
      throw BracketError("alpha bracket: first zero still outside the boundary at the alpha cap");
    a_hi = std::min(2.0 * a_hi, config.allow_large_alpha ? 2.0 * a_hi : config.alpha_cap);
    p_hi = probe(problem, lambda, a_hi, cfg);
  }

  auto close_enough = [&](const Probe& p) {
    return p.sol && std::abs(p.rho() - R) <= kBoundaryTol * R;
  };
  for (int it = 0; it < 200 && !close_enough(p_lo) && !close_enough(p_hi); ++it) {
    if (a_hi - a_lo <= 1e-15 * a_hi) break;
    const double mid = 0.5 * (a_lo + a_hi);
    Probe pm = probe(problem, lambda, mid, cfg);
    if (pm.rho() > p_lo.rho() || pm.rho() < p_hi.rho()) {
      std::ostringstream os;
      os.precision(17);
      os << "first-zero radius not monotone in alpha at alpha=" << mid << " (rho=" << pm.rho()
         << ") between alpha=" << a_lo << " (rho=" << p_lo.rho() << ") and alpha=" << a_hi
         << " (rho=" << p_hi.rho() << ")";
      throw MultiplicityWarning(os.str(), a_lo, p_lo.rho(), a_hi, p_hi.rho());
    }
    if (pm.rho() > R) {
      a_lo = mid;
      p_lo = std::move(pm);
    } else {
      a_hi = mid;
      p_hi = std::move(pm);
    }
  }
  // Prefer the endpoint whose zero lies nearer the boundary.
  const double d_lo = p_lo.sol ? std::abs(p_lo.rho() - R) : kInf;
  const double d_hi = std::abs(p_hi.rho() - R);
  RadialSolution best = d_lo < d_hi ? std::move(*p_lo.sol) : std::move(*p_hi.sol);
  if (std::abs(best.boundary_radius - R) > 1e-8 * R)
    throw StagnationError("alpha bisection did not reach the boundary tolerance");
  return best;
}

double boundary_slope_residual(const RadialSolution& s) {
  const double R = s.boundary_radius;
  const State& y = s.final_state();
  const double w = s.problem.weight_unchecked(R);
  const double upp =
      -y[kDu] / R - w * (s.lambda * s.problem.f(y[kU]) + s.problem.lambda_shift() * y[kU]);
  return std::abs(upp + y[kDu] / R) / std::abs(y[kDu] / R);
}

}  // namespace tmlab
