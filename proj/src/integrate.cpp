#include "tmlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Dormand-Prince 5(4), coefficients and dense output from Hairer's DOPRI5.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp

struct Rhs {
  const ProblemSpec& problem;
  double lambda;
  double shift;

  State operator()(double r, const State& y) const {
    const double u = y[kU], du = y[kDu];
    const double w = problem.weight_unchecked(r);
    const double fu = problem.f(u);
    State d;
    d[kU] = du;
    d[kDu] = -du / r - w * (lambda * fu + shift * u);
    d[kDirichlet] = kTwoPi * du * du * r;
    d[kMass] = kTwoPi * problem.mass_density(u) * w * r;
    d[kNehari] = kTwoPi * u * fu * w * r;
    d[kUsq] = kTwoPi * u * u * w * r;
    return d;
  }
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    double acc = 0.0;
    for (const auto& [c, k] : terms) acc += c * (*k)[i];
    out[i] += h * acc;
  }
  return out;
}

struct StepResult {
  State y_new;
  State k7;
  double err;
  std::array<State, 5> dense;
};

StepResult dp_step(const Rhs& rhs, double r, const State& y, const State& k1, double h,
                   const IntegratorConfig& cfg, bool want_dense) {
  using namespace dp;
  const State k2 = rhs(r + c2 * h, axpy(y, h, {{a21, &k1}}));
  const State k3 = rhs(r + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
  const State k4 = rhs(r + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State k5 = rhs(r + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State k6 =
      rhs(r + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const State y5 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
  const State k7 = rhs(r + h, y5);

  double sum = 0.0;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    const double e =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
    sum += (e / sk) * (e / sk);
  }
  StepResult out{y5, k7, std::sqrt(sum / kStateSize), {}};
  if (want_dense) {
    auto& rc = out.dense;
    for (std::size_t i = 0; i < kStateSize; ++i) {
      const double ydiff = y5[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      rc[0][i] = y[i];
      rc[1][i] = ydiff;
      rc[2][i] = bspl;
      rc[3][i] = ydiff - h * k7[i] - bspl;
      rc[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                      d7 * k7[i]);
    }
  }
  if (!std::all_of(y5.begin(), y5.end(), [](double v) { return std::isfinite(v); }) ||
      !std::isfinite(out.err))
    out.err = std::numeric_limits<double>::infinity();
  return out;
}

double dense_component(const std::array<State, 5>& rc, std::size_t i, double theta) {
  const double t1 = 1.0 - theta;
  return rc[0][i] + theta * (rc[1][i] + t1 * (rc[2][i] + theta * (rc[3][i] + t1 * rc[4][i])));
}

// d/dtheta of dense_component.
double dense_component_dtheta(const std::array<State, 5>& rc, std::size_t i, double theta) {
  const double t1 = 1.0 - theta;
  const double p = rc[2][i] + theta * (rc[3][i] + t1 * rc[4][i]);
  const double dp = rc[3][i] + (1.0 - 2.0 * theta) * rc[4][i];
  const double q = rc[1][i] + t1 * p;
  const double dq = -p + t1 * dp;
  return q + theta * dq;
}

State startup_state(const StartupSeries& s, double alpha, double r) {
  const double r2 = r * r;
  State y;
  y[kU] = alpha + s.c2 * r2 + s.c4 * r2 * r2;
  y[kDu] = 2.0 * s.c2 * r + 4.0 * s.c4 * r2 * r;
  y[kDirichlet] = kTwoPi * r2 * r2 *
                  (s.c2 * s.c2 + (8.0 / 3.0) * s.c2 * s.c4 * r2 + 2.0 * s.c4 * s.c4 * r2 * r2);
  y[kMass] = M_PI * r2 * s.mass0;
  y[kNehari] = M_PI * r2 * s.nehari0;
  y[kUsq] = M_PI * r2 * s.usq0;
  return y;
}

void check_alpha(double alpha, const IntegratorConfig& cfg) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
  if (alpha > cfg.alpha_cap && !cfg.allow_large_alpha) {
    std::ostringstream os;
    os << "alpha=" << alpha << " exceeds the configured cap " << cfg.alpha_cap
       << " (set allow_large_alpha to override)";
    throw RangeError(os.str());
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (!(startup_radius > 0.0)) throw ValidationError("startup radius must be positive");
  if (!(max_radius > 0.0)) throw ValidationError("max_radius must be positive");
  if (max_steps <= 0) throw ValidationError("max_steps must be positive");
}

StartupValue taylor_startup(const ProblemSpec& problem, double lambda, double alpha, double r0) {
  const double fa = problem.f(alpha);
  if (!std::isfinite(fa) || !std::isfinite(problem.df(alpha)))
    throw RangeError("f(alpha) overflows double precision");
  const double s = problem.lambda_shift();
  const double g = lambda * fa + s * alpha;
  const double dg = lambda * problem.df(alpha) + s;
  const double w0 = problem.weight_at_origin(), w2 = problem.weight_r2_coefficient();

  StartupValue out;
  out.r0 = r0;
  out.series.c2 = -w0 * g / 4.0;
  out.series.c4 = -(w0 * dg * out.series.c2 + w2 * g) / 16.0;
  out.series.mass0 = problem.mass_density(alpha) * w0;
  out.series.nehari0 = problem.nehari_density(alpha) * w0;
  out.series.usq0 = alpha * alpha * w0;
  const State y = startup_state(out.series, alpha, r0);
  out.u = y[kU];
  out.du = y[kDu];
  return out;
}

double startup_radius_for(const ProblemSpec& problem, double lambda, double alpha,
                          const IntegratorConfig& config) {
  const double g = lambda * problem.f(alpha) + problem.lambda_shift() * alpha;
  const double curvature = problem.weight_at_origin() * std::abs(g) / alpha;
  const double length = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : 1.0;
  return std::min(config.startup_radius, 1e-3 * length);
}

RadialSolution integrate_ivp(const ProblemSpec& problem, double lambda, double alpha,
                             const IntegratorConfig& config) {
  config.validate();
  check_alpha(alpha, config);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");

  const double r0 = startup_radius_for(problem, lambda, alpha, config);
  const StartupValue start = taylor_startup(problem, lambda, alpha, r0);

  double r_max = config.max_radius;
  if (problem.is_hyperbolic())
    r_max = std::min(r_max, 0.5 * (1.0 + problem.boundary_radius()));

  RadialSolution sol{problem, lambda, alpha, {}, {}, {}, start.series, 0.0, 0.0};
  sol.grid = {0.0, r0};
  sol.nodes = {State{alpha, 0.0, 0.0, 0.0, 0.0, 0.0}, startup_state(start.series, alpha, r0)};

  const Rhs rhs{problem, lambda, problem.lambda_shift()};
  double r = r0;
  State y = sol.nodes.back();
  State k1 = rhs(r, y);
  double h = 50.0 * r0;
  bool last_rejected = false;

  for (long step = 0;; ++step) {
    if (step >= config.max_steps) throw StepLimitError("step budget exhausted before first zero");
    if (r >= r_max) throw NoZeroError("no zero of u before max_radius");
    if (r + h > r_max) h = r_max - r;

    StepResult st = dp_step(rhs, r, y, k1, h, config, true);
    if (!(st.err <= 1.0)) {
      if (!std::isfinite(st.err) && h < 1e-300) throw OverflowError("non-finite state");
      const double fac = std::isfinite(st.err) ? std::max(0.2, 0.9 * std::pow(st.err, -0.2)) : 0.1;
      h *= fac;
      last_rejected = true;
      if (h < 1e-14 * r) throw StagnationError("step size underflow");
      continue;
    }

    if (st.y_new[kU] <= 0.0) {
      // Bisection on the dense u-interpolant; the sign change is bracketed by
      // u(theta = 0) > 0 and u(theta = 1) <= 0.
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double um = dense_component(st.dense, kU, mid);
        if (std::abs(um) <= config.abs_tol * 1e-3 && hi - lo < 1e-15) break;
        (um > 0.0 ? lo : hi) = mid;
      }
      const double theta = 0.5 * (lo + hi);
      const double h_event = theta * h;
      // One genuine step onto the located radius for the boundary state.
      StepResult fin = dp_step(rhs, r, y, k1, h_event, config, true);
      sol.segments.push_back({r, h_event, fin.dense});
      sol.grid.push_back(r + h_event);
      sol.nodes.push_back(fin.y_new);
      sol.boundary_radius = r + h_event;
      sol.du_at_boundary = fin.y_new[kDu];
      return sol;
    }

    sol.segments.push_back({r, h, st.dense});
    r += h;
    y = st.y_new;
    k1 = st.k7;
    sol.grid.push_back(r);
    sol.nodes.push_back(y);

    double fac = 0.9 * std::pow(std::max(st.err, 1e-10), -0.2);
    fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
    h *= fac;
    last_rejected = false;
  }
}

State evaluate_dense(const RadialSolution& s, double r) {
  if (!(r >= 0.0) || r > s.boundary_radius) throw RangeError("radius outside the solution domain");
  if (r <= s.grid[1]) {
    if (r == s.grid[1]) return s.nodes[1];
    if (r == 0.0) return s.nodes[0];
    return startup_state(s.startup, s.alpha, r);
  }
  const auto it = std::lower_bound(s.grid.begin() + 1, s.grid.end(), r);
  const std::size_t idx = static_cast<std::size_t>(it - s.grid.begin());
  if (*it == r) return s.nodes[idx];
  const DenseSegment& seg = s.segments[idx - 2];
  const double theta = (r - seg.r_start) / seg.h;
  State out;
  for (std::size_t i = 0; i < kStateSize; ++i) out[i] = dense_component(seg.coeff, i, theta);
  return out;
}

double evaluate_second_derivative(const RadialSolution& s, double r) {
  if (!(r >= 0.0) || r > s.boundary_radius) throw RangeError("radius outside the solution domain");
  if (r <= s.grid[1]) return 2.0 * s.startup.c2 + 12.0 * s.startup.c4 * r * r;
  auto it = std::lower_bound(s.grid.begin() + 1, s.grid.end(), r);
  std::size_t idx = static_cast<std::size_t>(it - s.grid.begin());
  const DenseSegment& seg = s.segments[idx - 2];
  const double theta = (r - seg.r_start) / seg.h;
  return dense_component_dtheta(seg.coeff, kDu, theta) / seg.h;
}

double defining_residual(const RadialSolution& s) {
  // The midpoint derivative comes from the quintic Hermite interpolant of u'
  // through both nodes, with u'' and u''' taken from the equation there. The
  // dense output derivative is only fourth order and swamps the budget at large alpha.
  const ProblemSpec& P = s.problem;
  const double lambda = s.lambda, shift = P.lambda_shift();
  auto dweight = [&](double r) {
    if (!P.is_hyperbolic()) return 0.0;
    const double q = 1.0 - r * r;
    return 16.0 * r / (q * q * q);
  };
  auto source = [&](double u) { return lambda * P.f(u) + shift * u; };
  auto d1 = [&](double r, double u, double p) { return -p / r - P.weight_unchecked(r) * source(u); };
  auto d2 = [&](double r, double u, double p) {
    return p / (r * r) - d1(r, u, p) / r - dweight(r) * source(u) -
           P.weight_unchecked(r) * (lambda * P.df(u) + shift) * p;
  };

  double worst = 0.0;
  for (std::size_t k = 0; k < s.segments.size(); ++k) {
    const double ra = s.grid[k + 1], rb = s.grid[k + 2], h = rb - ra;
    const State& ya = s.nodes[k + 1];
    const State& yb = s.nodes[k + 2];
    const double u0 = ya[kU], u1 = yb[kU], p0 = ya[kDu], p1 = yb[kDu];
    const double q0 = d1(ra, u0, p0), q1 = d1(rb, u1, p1);
    const double c0 = d2(ra, u0, p0), c1 = d2(rb, u1, p1);
    const double u = 0.5 * (u0 + u1) + 5.0 * h * (p0 - p1) / 32.0 + h * h * (q0 + q1) / 64.0;
    const double du = 0.5 * (p0 + p1) + 5.0 * h * (q0 - q1) / 32.0 + h * h * (c0 + c1) / 64.0;
    const double d2u = 15.0 * (p1 - p0) / (8.0 * h) - 7.0 * (q0 + q1) / 16.0 + h * (c1 - c0) / 32.0;
    const double r = ra + 0.5 * h;
    const double w = P.weight_unchecked(r);
    const double fu = P.f(u);
    const double res = std::abs(du + r * d2u + r * w * (lambda * fu + shift * u));
    const double scale = lambda * r * w * std::abs(fu) + shift * r * w * std::abs(u) + 1.0;
    worst = std::max(worst, res / scale);
  }
  return worst;
}

double dirichlet_quadrature(const RadialSolution& s) {
  // 5-point Gauss-Legendre on [0,1]
  static constexpr double x[5] = {0.046910077030668, 0.230765344947158, 0.5,
                                  0.769234655052842, 0.953089922969332};
  static constexpr double wq[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444,
                                   0.239314335249683, 0.118463442528095};
  const double r0 = s.grid[1];
  const auto& st = s.startup;
  double total = kTwoPi * r0 * r0 * r0 * r0 *
                 (st.c2 * st.c2 + (8.0 / 3.0) * st.c2 * st.c4 * r0 * r0 +
                  2.0 * st.c4 * st.c4 * r0 * r0 * r0 * r0);
  for (const DenseSegment& seg : s.segments) {
    double acc = 0.0;
    for (int q = 0; q < 5; ++q) {
      const double du = dense_component(seg.coeff, kDu, x[q]);
      acc += wq[q] * du * du * (seg.r_start + x[q] * seg.h);
    }
    total += kTwoPi * acc * seg.h;
  }
  return total;
}

}  // namespace tmlab
