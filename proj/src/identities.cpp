#include "tmlab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmlab/errors.hpp"
#include "tmlab/integrate.hpp"
#include "tmlab/series.hpp"

namespace tmlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

void finish(ResidualReport& rep) {
  rep.max_relative = 0.0;
  for (double r : rep.relative) rep.max_relative = std::max(rep.max_relative, r);
  rep.pass = rep.max_relative <= rep.tolerance;
}

}  // namespace

ResidualReport pohozaev_residual(const RadialSolution& s, const std::vector<double>& radii) {
  if (!s.problem.is_euclidean())
    throw UnsupportedIdentity("the Pohozaev identity is implemented for Euclidean discs only");
  const double lambda = s.lambda, shift = s.problem.lambda_shift();
  ResidualReport rep;
  rep.identity = "pohozaev";
  rep.tolerance = kIdentityTolerance;
  for (double r : radii) {
    const State y = evaluate_dense(s, r);
    const double area = M_PI * r * r;
    const double kinetic = area * y[kDu] * y[kDu];
    const double bulk = lambda * y[kMass] + shift * y[kUsq];
    const double edge = area * (lambda * s.problem.mass_density(y[kU]) + shift * y[kU] * y[kU]);
    const double res = kinetic - bulk + edge;
    const double scale = max_abs({kinetic, lambda * y[kMass], shift * y[kUsq], edge});
    rep.radii.push_back(r);
    rep.absolute.push_back(std::abs(res));
    rep.relative.push_back(scale > 0.0 ? std::abs(res) / scale : 0.0);
  }
  finish(rep);
  return rep;
}

ResidualReport nehari_residual(const RadialSolution& s) {
  const State& y = s.final_state();
  const double shifted = s.problem.lambda_shift() * y[kUsq];
  const double res = y[kDirichlet] - shifted - s.lambda * y[kNehari];
  const double scale = max_abs({y[kDirichlet], shifted, s.lambda * y[kNehari]});
  ResidualReport rep;
  rep.identity = "nehari";
  rep.tolerance = kIdentityTolerance;
  rep.radii = {s.boundary_radius};
  rep.absolute = {std::abs(res)};
  rep.relative = {scale > 0.0 ? std::abs(res) / scale : 0.0};
  finish(rep);
  return rep;
}

ResidualSummary residual_summary(const RadialSolution& s) {
  ResidualSummary out;
  out.nehari = nehari_residual(s).max_relative;
  out.pohozaev = s.problem.is_euclidean()
                     ? pohozaev_residual(s, {s.boundary_radius}).max_relative
                     : kNaN;
  return out;
}

BoundaryDerivatives boundary_derivatives(const RadialSolution& s, int order) {
  if (order < 2 || order > 6) throw ValidationError("boundary derivative order must be in [2, 6]");
  if (!s.problem.is_euclidean() || s.problem.kind() == NonlinearityKind::Shifted)
    throw UnsupportedIdentity(
        "boundary recurrence needs an unweighted problem without a linear shift");

  const double R = s.boundary_radius;
  // v(x) = u(R x) solves the radius-1 problem with lambda R^2 and v'(1) = R u'(R).
  const auto rec = series::boundary_recurrence(static_cast<unsigned>(order), s.problem.kind());
  const std::array<double, series::kSymbols> at{R * s.du_at_boundary, 0.0, 0.0,
                                                s.lambda * R * R};
  BoundaryDerivatives out;
  out.values.resize(order + 1);
  double rk = 1.0;
  for (int k = 0; k <= order; ++k) {
    out.values[k] = rec[k].evaluate(at) / rk;
    rk *= R;
  }

  auto du = [&](double r) { return evaluate_dense(s, r)[kDu]; };
  const double h2 = 1e-3 * R, h3 = 2e-3 * R;
  out.fd_second = (3.0 * du(R) - 4.0 * du(R - h2) + du(R - 2.0 * h2)) / (2.0 * h2);
  out.fd_third =
      (2.0 * du(R) - 5.0 * du(R - h3) + 4.0 * du(R - 2.0 * h3) - du(R - 3.0 * h3)) / (h3 * h3);
  out.fd_rel_second = std::abs(out.fd_second - out.values[2]) / std::abs(out.values[2]);
  out.fd_rel_third = std::abs(out.fd_third - out.values[3]) / std::abs(out.values[3]);
  out.flagged = !(out.fd_rel_second <= 1e-4) || !(out.fd_rel_third <= 1e-4);
  return out;
}

ComparisonReport comparison_diagnostics(const RadialSolution& a, const RadialSolution& b,
                                        int samples) {
  if (samples < 8) throw ValidationError("comparison needs at least 8 samples");
  // u is the solution with the smaller value at the origin, v the other.
  const bool swap = b.alpha < a.alpha;
  const RadialSolution& u = swap ? b : a;
  const RadialSolution& v = swap ? a : b;

  ComparisonReport rep;
  rep.alpha_lo = u.alpha;
  rep.alpha_hi = v.alpha;

  std::vector<double> x(samples + 1), ratio(samples + 1), diff(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    x[i] = static_cast<double>(i) / samples;
    if (i == samples) {
      // Both vanish at x = 1; the ratio extends by the slopes.
      const double su = u.du_at_boundary * u.boundary_radius;
      const double sv = v.du_at_boundary * v.boundary_radius;
      ratio[i] = su / sv;
      diff[i] = 0.0;
      continue;
    }
    const double uu = evaluate_dense(u, x[i] * u.boundary_radius)[kU];
    const double vv = evaluate_dense(v, x[i] * v.boundary_radius)[kU];
    ratio[i] = uu / vv;
    diff[i] = uu - vv;
  }

  for (int i = 1; i < samples; ++i) {
    if (diff[i - 1] != 0.0 && (diff[i - 1] > 0.0) != (diff[i] > 0.0) && diff[i] != 0.0) {
      ++rep.intersections;
      rep.crossing_x.push_back(0.5 * (x[i - 1] + x[i]));
    }
  }

  int prev_sign = 0;
  bool inc = true, dec = true;
  for (int i = 1; i <= samples; ++i) {
    const double d = ratio[i] - ratio[i - 1];
    const double tol = 1e-12 * std::max(std::abs(ratio[i]), 1.0);
    const int sg = d > tol ? 1 : (d < -tol ? -1 : 0);
    if (sg < 0) inc = false;
    if (sg > 0) dec = false;
    if (sg != 0) {
      if (prev_sign != 0 && sg != prev_sign) ++rep.ratio_turns;
      prev_sign = sg;
    }
  }
  rep.ratio_increasing = inc && !dec;
  rep.ratio_decreasing = dec && !inc;

  const auto [mn, mx] = std::minmax_element(ratio.begin(), ratio.end());
  rep.ratio_min = *mn;
  rep.ratio_max = *mx;
  rep.t = *mn;
  const auto imin = static_cast<int>(mn - ratio.begin());
  rep.xi = x[imin];
  rep.contact_case = imin == 0 ? 'a' : (imin == samples ? 'c' : 'b');
  return rep;
}

}  // namespace tmlab
