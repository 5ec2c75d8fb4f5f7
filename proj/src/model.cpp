#include "tmlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

// e^{x} - 1 - x without cancellation for small x.
double expm1_minus_x(double x) {
  if (std::abs(x) < 1e-2) {
    double term = x * x / 2.0, sum = term;
    for (int k = 3; k < 12; ++k) {
      term *= x / k;
      sum += term;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

}  // namespace

double conformal_radius(double geodesic_radius) { return std::tanh(0.5 * geodesic_radius); }

ProblemSpec ProblemSpec::make(Geometry geometry, Nonlinearity nonlinearity) {
  double rb = 0.0;
  if (const auto* d = std::get_if<EuclideanDisc>(&geometry)) {
    if (!(d->radius > 0.0) || !std::isfinite(d->radius))
      throw ValidationError("disc radius must be positive and finite");
    rb = d->radius;
  } else {
    const auto& h = std::get<HyperbolicBall>(geometry);
    if (!(h.geodesic_radius > 0.0) || !std::isfinite(h.geodesic_radius))
      throw ValidationError("geodesic radius must be positive and finite");
    rb = conformal_radius(h.geodesic_radius);
    if (!(rb < 1.0))
      throw RangeError("geodesic radius too large: conformal radius rounds to 1");
  }
  if (!(nonlinearity.lambda_shift >= 0.0) || !std::isfinite(nonlinearity.lambda_shift))
    throw ValidationError("lambda_shift must be a finite nonnegative number");
  if (nonlinearity.kind != NonlinearityKind::Shifted && nonlinearity.lambda_shift != 0.0)
    throw ValidationError("lambda_shift is only meaningful for the shifted nonlinearity");
  return ProblemSpec(geometry, nonlinearity, rb);
}

double ProblemSpec::weight(double r) const {
  if (!(r >= 0.0) || r > boundary_radius_)
    throw RangeError("radius outside [0, boundary_radius]");
  return weight_unchecked(r);
}

double ProblemSpec::weight_unchecked(double r) const noexcept {
  if (!is_hyperbolic()) return 1.0;
  const double q = 2.0 / (1.0 - r * r);
  return q * q;
}

double ProblemSpec::f(double u) const noexcept {
  switch (kind()) {
    case NonlinearityKind::Perturbed:
      return u * std::expm1(u * u);
    case NonlinearityKind::Linear:
      return u;
    default:
      return u * std::exp(u * u);
  }
}

double ProblemSpec::df(double u) const noexcept {
  const double u2 = u * u;
  switch (kind()) {
    case NonlinearityKind::Perturbed:
      return std::expm1(u2) + 2.0 * u2 * std::exp(u2);
    case NonlinearityKind::Linear:
      return 1.0;
    default:
      return (1.0 + 2.0 * u2) * std::exp(u2);
  }
}

double ProblemSpec::mass_density(double u) const noexcept {
  const double u2 = u * u;
  switch (kind()) {
    case NonlinearityKind::Perturbed:
      return expm1_minus_x(u2);
    case NonlinearityKind::Linear:
      return u2;
    default:
      return std::expm1(u2);
  }
}

ProblemSpec ProblemSpec::with_nonlinearity(Nonlinearity nonlinearity) const {
  return make(geometry_, nonlinearity);
}

std::string ProblemSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* d = std::get_if<EuclideanDisc>(&geometry_))
    os << "euclid(radius=" << d->radius << ")";
  else
    os << "hyper(R=" << std::get<HyperbolicBall>(geometry_).geodesic_radius << ")";
  switch (kind()) {
    case NonlinearityKind::Standard: os << "/standard"; break;
    case NonlinearityKind::Perturbed: os << "/perturbed"; break;
    case NonlinearityKind::Shifted: os << "/shifted(" << lambda_shift() << ")"; break;
    case NonlinearityKind::Linear: os << "/linear"; break;
  }
  return os.str();
}

void check_shift_admissible(const ProblemSpec& problem, double mu1) {
  if (problem.kind() == NonlinearityKind::Shifted && !(problem.lambda_shift() < mu1)) {
    std::ostringstream os;
    os.precision(17);
    os << "lambda_shift=" << problem.lambda_shift() << " must be below the first eigenvalue "
       << mu1;
    throw ValidationError(os.str());
  }
}

std::vector<double> RadialSolution::column(Component c) const {
  std::vector<double> out(nodes.size());
  std::transform(nodes.begin(), nodes.end(), out.begin(), [c](const State& s) { return s[c]; });
  return out;
}

namespace {

// Per-component factors under r -> k r.
State scale_factors(double k) {
  const double area = k * k;
  return {1.0, 1.0 / k, 1.0, area, area, area};
}

}  // namespace

RadialSolution RadialSolution::rescaled(double k) const {
  RadialSolution out = *this;
  const State sf = scale_factors(k);
  out.lambda = lambda / (k * k);
  for (auto& r : out.grid) r *= k;
  for (auto& s : out.nodes)
    for (std::size_t i = 0; i < kStateSize; ++i) s[i] *= sf[i];
  for (auto& seg : out.segments) {
    seg.r_start *= k;
    seg.h *= k;
    for (auto& c : seg.coeff)
      for (std::size_t i = 0; i < kStateSize; ++i) c[i] *= sf[i];
  }
  out.startup.c2 /= k * k;
  out.startup.c4 /= k * k * k * k;
  out.boundary_radius = boundary_radius * k;
  out.du_at_boundary = du_at_boundary / k;
  out.grid.back() = out.boundary_radius;
  return out;
}

double ResidualSummary::max() const {
  double m = 0.0;
  if (std::isfinite(pohozaev)) m = std::max(m, pohozaev);
  if (std::isfinite(nehari)) m = std::max(m, nehari);
  return m;
}

double energy_of(const RadialSolution& s) {
  const State& y = s.final_state();
  const double shift = s.problem.lambda_shift();
  return 0.5 * (y[kDirichlet] - shift * y[kUsq]) - 0.5 * s.lambda * y[kMass];
}

}  // namespace tmlab
