#include "tmlab/branch.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "tmlab/eigen.hpp"
#include "tmlab/errors.hpp"
#include "tmlab/hash.hpp"
#include "tmlab/identities.hpp"
#include "tmlab/shoot.hpp"

namespace tmlab {

namespace {

constexpr double kFourPi = 4.0 * M_PI;
constexpr double kTwoPi = 2.0 * M_PI;

std::string fmt17(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

[[noreturn]] void rethrow_annotated(const std::exception_ptr& ep, std::size_t index, double alpha) {
  const std::string where = "grid index " + std::to_string(index) + " (alpha=" + fmt17(alpha) + "): ";
  try {
    std::rethrow_exception(ep);
  } catch (const ValidationError& e) {
    throw ValidationError(where + e.kind() + ": " + e.what());
  } catch (const SolverError& e) {
    throw SolverError(where + e.kind() + ": " + e.what());
  }
}

struct Prepared {
  BranchTable table;
  std::vector<double> alphas;
  std::optional<double> upper;
};

Prepared prepare(const ProblemSpec& problem, const AlphaGrid& grid, const IntegratorConfig& config) {
  config.validate();
  Prepared p;
  p.alphas = grid.values();
  p.table.problem = problem;
  p.table.grid = grid;
  p.table.config = config;
  p.table.config_hash = branch_config_hash(problem, grid, config);
  if (problem.kind() != NonlinearityKind::Perturbed) {
    const double mu1 = first_eigenvalue(problem, config).mu1;
    check_shift_admissible(problem, mu1);
    p.table.mu1 = mu1;
    p.upper = admissible_lambda_upper(problem, mu1);
  } else {
    p.upper = admissible_lambda_upper(problem, 0.0);
  }
  p.table.points.resize(p.alphas.size());
  return p;
}

double Lambda_at(const BranchTable& t, double alpha, double* lambda_out) {
  std::optional<double> upper;
  if (t.mu1) upper = admissible_lambda_upper(t.problem, *t.mu1);
  ShootResult r = lambda_of_alpha(t.problem, alpha, t.config, upper);
  if (lambda_out) *lambda_out = r.lambda;
  return r.solution.final_state()[kDirichlet];
}

}  // namespace

std::vector<double> AlphaGrid::values() const {
  if (!(alpha_min > 0.0) || !(alpha_max > alpha_min) || !std::isfinite(alpha_max))
    throw ValidationError("alpha grid needs 0 < alpha_min < alpha_max");
  if (points < 2) throw ValidationError("alpha grid needs at least two points");
  std::vector<double> v(points);
  const double n = points - 1;
  for (int i = 0; i < points; ++i) {
    const double s = i / n;
    v[i] = log_spaced
               ? std::exp(std::log(alpha_min) + s * (std::log(alpha_max) - std::log(alpha_min)))
               : alpha_min + s * (alpha_max - alpha_min);
  }
  v.front() = alpha_min;
  v.back() = alpha_max;
  return v;
}

std::string AlphaGrid::describe() const {
  return std::string(log_spaced ? "log" : "linear") + "[" + fmt17(alpha_min) + "," +
         fmt17(alpha_max) + "]x" + std::to_string(points);
}

bool BranchTable::residuals_pass(double tolerance) const {
  return std::all_of(points.begin(), points.end(),
                     [&](const BranchPoint& p) { return p.residual.max() <= tolerance; });
}

std::string branch_config_hash(const ProblemSpec& problem, const AlphaGrid& grid,
                               const IntegratorConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << problem.describe() << '|' << grid.describe() << '|' << c.rel_tol << ',' << c.abs_tol
     << ',' << c.startup_radius << ',' << c.max_radius << ',' << c.max_steps << ',' << c.alpha_cap
     << ',' << c.allow_large_alpha;
  return hex64(fnv1a64(os.str()));
}

BranchPoint branch_point(const ProblemSpec& problem, double alpha, const IntegratorConfig& config,
                         std::optional<double> lambda_upper) {
  const ShootResult r = lambda_of_alpha(problem, alpha, config, lambda_upper);
  const RadialSolution& s = r.solution;
  BranchPoint p;
  p.alpha = alpha;
  p.lambda = r.lambda;
  p.Lambda = s.final_state()[kDirichlet];
  p.energy = energy_of(s);
  p.du_at_boundary = s.du_at_boundary;
  p.sup_u = alpha;
  p.residual = residual_summary(s);
  return p;
}

BranchTable trace_branch_serial(const ProblemSpec& problem, const AlphaGrid& grid,
                                const IntegratorConfig& config) {
  Prepared p = prepare(problem, grid, config);
  for (std::size_t i = 0; i < p.alphas.size(); ++i) {
    try {
      p.table.points[i] = branch_point(problem, p.alphas[i], config, p.upper);
    } catch (const Error&) {
      rethrow_annotated(std::current_exception(), i, p.alphas[i]);
    }
  }
  return std::move(p.table);
}

BranchTable trace_branch(const ProblemSpec& problem, const AlphaGrid& grid,
                         const IntegratorConfig& config) {
  Prepared p = prepare(problem, grid, config);
  const long n = static_cast<long>(p.alphas.size());
  std::vector<std::exception_ptr> errors(p.alphas.size());

  // Each index writes only its own slot, so the merge is order independent.
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      p.table.points[i] = branch_point(problem, p.alphas[i], config, p.upper);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (errors[i]) rethrow_annotated(errors[i], i, p.alphas[i]);
  return std::move(p.table);
}

GammaStar gamma_star(const BranchTable& table) {
  const auto& pts = table.points;
  if (pts.size() < 3) throw RangeError("gamma* needs at least three branch points");
  const auto it = std::max_element(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
    return x.Lambda < y.Lambda;
  });
  const std::size_t i = static_cast<std::size_t>(it - pts.begin());
  if (i == 0 || i + 1 == pts.size())
    throw RangeError("maximum of Lambda at the end of the alpha grid; extend the grid");

  // Vertex of the parabola through (log alpha, Lambda) at i-1, i, i+1.
  const double x0 = std::log(pts[i - 1].alpha), x1 = std::log(pts[i].alpha),
               x2 = std::log(pts[i + 1].alpha);
  const double y0 = pts[i - 1].Lambda, y1 = pts[i].Lambda, y2 = pts[i + 1].Lambda;
  const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
  const double c2 = (d12 - d01) / (x2 - x0);
  GammaStar g;
  g.index = i;
  if (!(c2 < 0.0)) {
    g.gamma_star = y1;
    g.alpha_at_max = pts[i].alpha;
    return g;
  }
  const double c1 = d01 - c2 * (x0 + x1);
  const double xv = std::clamp(-c1 / (2.0 * c2), x0, x2);
  g.gamma_star = y0 + (xv - x0) * (d01 + c2 * (xv - x1));
  g.alpha_at_max = std::exp(xv);
  return g;
}

CriticalPointCount count_critical_points(const BranchTable& table, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be positive");
  const auto& pts = table.points;
  if (pts.size() < 2) throw ValidationError("branch table has fewer than two points");

  std::optional<GammaStar> gs;
  try {
    gs = gamma_star(table);
  } catch (const RangeError&) {
  }
  if (gs) {
    const std::size_t i = gs->index;
    const double resolution = gs->gamma_star - std::min(pts[i - 1].Lambda, pts[i + 1].Lambda);
    if (std::abs(gamma - gs->gamma_star) <= resolution) {
      std::ostringstream os;
      os.precision(17);
      os << "gamma=" << gamma << " is within the grid resolution " << resolution
         << " of gamma*=" << gs->gamma_star << "; refine the alpha grid";
      throw AmbiguousCount(os.str());
    }
  }

  CriticalPointCount out;
  auto d = [&](std::size_t i) { return pts[i].Lambda - gamma; };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (d(i) == 0.0) {
      out.crossings.push_back({pts[i].alpha, pts[i].lambda, pts[i].Lambda});
      continue;
    }
    if (i + 1 == pts.size() || d(i + 1) == 0.0 || (d(i) > 0.0) == (d(i + 1) > 0.0)) continue;

    // Illinois regula falsi on alpha.
    double a0 = pts[i].alpha, a1 = pts[i + 1].alpha, f0 = d(i), f1 = d(i + 1);
    Crossing c{a0, pts[i].lambda, pts[i].Lambda};
    int side = 0;
    for (int it = 0; it < 100; ++it) {
      double am = a1 - f1 * (a1 - a0) / (f1 - f0);
      if (!(am > std::min(a0, a1) && am < std::max(a0, a1))) am = 0.5 * (a0 + a1);
      double lam = 0.0;
      const double Lm = Lambda_at(table, am, &lam);
      const double fm = Lm - gamma;
      c = {am, lam, Lm};
      if (std::abs(fm) <= 1e-13 * gamma || std::abs(a1 - a0) <= 1e-14 * am) break;
      if ((fm > 0.0) == (f1 > 0.0)) {
        a1 = am;
        f1 = fm;
        if (side == 1) f0 *= 0.5;
        side = 1;
      } else {
        a0 = am;
        f0 = fm;
        if (side == -1) f1 *= 0.5;
        side = -1;
      }
    }
    out.crossings.push_back(c);
  }
  out.count = static_cast<int>(out.crossings.size());
  return out;
}

double half_energy_radius(const RadialSolution& s) {
  const double target = 0.5 * s.final_state()[kDirichlet];
  double lo = 0.0, hi = s.boundary_radius;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (evaluate_dense(s, mid)[kDirichlet] < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

QuantizationReport quantization_report(const ProblemSpec& problem,
                                       const std::vector<double>& tail,
                                       const IntegratorConfig& config) {
  if (tail.size() < 3) throw ValidationError("quantization tail needs at least three alphas");
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (!(tail[i] >= 3.0)) throw ValidationError("quantization tail alphas must be >= 3");
    if (i > 0 && !(tail[i] > tail[i - 1]))
      throw ValidationError("quantization tail must be strictly increasing");
  }
  std::optional<double> upper;
  if (problem.kind() != NonlinearityKind::Perturbed && !problem.scale_covariant()) {
    const double mu1 = first_eigenvalue(problem, config).mu1;
    check_shift_admissible(problem, mu1);
    upper = admissible_lambda_upper(problem, mu1);
  }

  QuantizationReport rep;
  rep.points.resize(tail.size());
  std::vector<std::exception_ptr> errors(tail.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(tail.size()); ++i) {
    try {
      const ShootResult r = lambda_of_alpha(problem, tail[i], config, upper);
      rep.points[i] = {tail[i], r.lambda, r.solution.final_state()[kDirichlet],
                       energy_of(r.solution), half_energy_radius(r.solution)};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (errors[i]) rethrow_annotated(errors[i], i, tail[i]);

  const auto& p = rep.points;
  rep.lambda_decreasing = rep.gap_decreasing = rep.r_half_decreasing = rep.energy_increasing = true;
  rep.energy_below_2pi = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    rep.energy_below_2pi = rep.energy_below_2pi && p[i].energy < kTwoPi;
    if (i == 0) continue;
    rep.lambda_decreasing = rep.lambda_decreasing && p[i].lambda < p[i - 1].lambda;
    rep.gap_decreasing = rep.gap_decreasing &&
                         std::abs(p[i].Lambda - kFourPi) < std::abs(p[i - 1].Lambda - kFourPi);
    rep.r_half_decreasing = rep.r_half_decreasing && p[i].r_half < p[i - 1].r_half;
    rep.energy_increasing = rep.energy_increasing && p[i].energy > p[i - 1].energy;
  }
  if (!rep.lambda_decreasing) rep.diagnostics.push_back("lambda not decreasing along the tail");
  if (!rep.gap_decreasing) rep.diagnostics.push_back("|Lambda - 4 pi| not decreasing along the tail");
  if (!rep.r_half_decreasing) rep.diagnostics.push_back("r_half not decreasing along the tail");
  if (!rep.energy_increasing) rep.diagnostics.push_back("energy not increasing along the tail");

  // Lambda = L + C alpha^{-p}: the ratio of successive differences fixes p.
  const std::size_t n = p.size();
  const double a1 = p[n - 3].alpha, a2 = p[n - 2].alpha, a3 = p[n - 1].alpha;
  const double l1 = p[n - 3].Lambda, l2 = p[n - 2].Lambda, l3 = p[n - 1].Lambda;
  const double q = (l1 - l2) / (l2 - l3);
  auto ratio = [&](double e) {
    const double x1 = std::pow(a1, -e), x2 = std::pow(a2, -e), x3 = std::pow(a3, -e);
    return (x1 - x2) / (x2 - x3);
  };
  double lo = 1e-3, hi = 60.0;
  if (!std::isfinite(q) || (ratio(lo) - q) * (ratio(hi) - q) > 0.0) {
    rep.diagnostics.push_back("tail not in a power-law regime; extrapolation uses the last value");
    rep.extrapolated_limit = l3;
    return rep;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((ratio(mid) - q) * (ratio(lo) - q) > 0.0 ? lo : hi) = mid;
  }
  rep.fitted_order = 0.5 * (lo + hi);
  const double e = rep.fitted_order;
  const double C = (l2 - l3) / (std::pow(a2, -e) - std::pow(a3, -e));
  rep.extrapolated_limit = l3 - C * std::pow(a3, -e);
  return rep;
}

PerturbedBound perturbed_energy_bound(const AlphaGrid& grid, const IntegratorConfig& config) {
  const ProblemSpec problem = ProblemSpec::make(EuclideanDisc{1.0}, Nonlinearity::perturbed());
  PerturbedBound out;
  out.table = trace_branch(problem, grid, config);
  out.energy_band = true;
  out.min_energy_minus_quarter = std::numeric_limits<double>::infinity();
  for (const BranchPoint& pt : out.table.points) {
    if (pt.Lambda > out.max_Lambda) {
      out.max_Lambda = pt.Lambda;
      out.alpha_at_max = pt.alpha;
    }
    out.energy_band = out.energy_band && pt.energy > 0.0 && pt.energy < kTwoPi;
    out.min_energy_minus_quarter = std::min(out.min_energy_minus_quarter, pt.energy - 0.25 * pt.Lambda);
  }
  out.margin = 8.0 * M_PI - out.max_Lambda;
  return out;
}

}  // namespace tmlab
