#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace tmlab {

// ---------------------------------------------------------------------------
// Geometry and nonlinearity
// ---------------------------------------------------------------------------

struct EuclideanDisc {
  double radius = 1.0;
};

/// Geodesic ball B_H(0, R) in the Poincare disc model. Stored after the
/// conformal reduction as a weighted Euclidean problem on [0, tanh(R/2)].
struct HyperbolicBall {
  double geodesic_radius = 1.0;
};

using Geometry = std::variant<EuclideanDisc, HyperbolicBall>;

enum class NonlinearityKind {
  Standard,   ///< f(u) = u e^{u^2}
  Perturbed,  ///< f(u) = u (e^{u^2} - 1)
  Shifted,    ///< f(u) = u e^{u^2}, with -lambda_shift * u moved into the operator
  Linear,     ///< f(u) = u; used by the eigenvalue solver and linear cross-checks
};

struct Nonlinearity {
  NonlinearityKind kind = NonlinearityKind::Standard;
  double lambda_shift = 0.0;

  static Nonlinearity standard() { return {NonlinearityKind::Standard, 0.0}; }
  static Nonlinearity perturbed() { return {NonlinearityKind::Perturbed, 0.0}; }
  static Nonlinearity shifted(double lambda_shift) {
    return {NonlinearityKind::Shifted, lambda_shift};
  }
  static Nonlinearity linear() { return {NonlinearityKind::Linear, 0.0}; }
};

/// (e^R - 1) / (e^R + 1): Euclidean radius of the geodesic ball of radius R.
double conformal_radius(double geodesic_radius);

/// One radial problem  -(r u')' - s r w(r) u = lambda r w(r) f(u)  on
/// [0, boundary_radius], u'(0) = 0, u(boundary_radius) = 0, where s is the
/// shift (zero unless Shifted). Immutable after construction.
class ProblemSpec {
 public:
  /// Unit Euclidean disc with the standard nonlinearity.
  ProblemSpec() : ProblemSpec(EuclideanDisc{}, Nonlinearity::standard(), 1.0) {}

  /// Validates and builds. Throws ValidationError on a nonpositive radius or a
  /// negative shift. Admissibility of the shift against the first eigenvalue
  /// is checked separately (check_shift_admissible) since it needs the
  /// eigenvalue solver.
  static ProblemSpec make(Geometry geometry, Nonlinearity nonlinearity);

  const Geometry& geometry() const noexcept { return geometry_; }
  const Nonlinearity& nonlinearity() const noexcept { return nonlinearity_; }
  NonlinearityKind kind() const noexcept { return nonlinearity_.kind; }
  double lambda_shift() const noexcept { return nonlinearity_.lambda_shift; }

  bool is_hyperbolic() const noexcept { return std::holds_alternative<HyperbolicBall>(geometry_); }
  bool is_euclidean() const noexcept { return !is_hyperbolic(); }

  /// Euclidean disc with the standard nonlinearity: u_s(r) = u(s r) maps
  /// solutions to solutions with lambda scaled by s^2.
  bool scale_covariant() const noexcept {
    return is_euclidean() && kind() == NonlinearityKind::Standard;
  }

  /// Disc radius, or R~ = tanh(R/2) for the hyperbolic ball.
  double boundary_radius() const noexcept { return boundary_radius_; }

  /// Conformal weight; throws RangeError outside [0, boundary_radius].
  double weight(double r) const;
  /// Same formula without the domain check; requires 0 <= r < 1.
  double weight_unchecked(double r) const noexcept;
  /// w(r) = w0 + w2 r^2 + O(r^4); used by the startup expansion.
  double weight_at_origin() const noexcept { return is_hyperbolic() ? 4.0 : 1.0; }
  double weight_r2_coefficient() const noexcept { return is_hyperbolic() ? 8.0 : 0.0; }

  /// f(u), the term multiplied by lambda.
  double f(double u) const noexcept;
  /// f'(u)
  double df(double u) const noexcept;
  /// 2 F(u) with F' = f, F(0) = 0: e^{u^2}-1, e^{u^2}-1-u^2, or u^2.
  double mass_density(double u) const noexcept;
  /// u f(u)
  double nehari_density(double u) const noexcept { return u * f(u); }

  ProblemSpec with_nonlinearity(Nonlinearity nonlinearity) const;

  /// Short stable identifier, e.g. "euclid(radius=1)/standard".
  std::string describe() const;

 private:
  ProblemSpec(Geometry g, Nonlinearity n, double rb)
      : geometry_(g), nonlinearity_(n), boundary_radius_(rb) {}

  Geometry geometry_;
  Nonlinearity nonlinearity_;
  double boundary_radius_;
};

/// Throws ValidationError unless lambda_shift < mu1 (the first eigenvalue of
/// the weighted operator on the same geometry).
void check_shift_admissible(const ProblemSpec& problem, double mu1);

// ---------------------------------------------------------------------------
// Radial solutions
// ---------------------------------------------------------------------------

/// Components of the augmented integration state.
enum Component : std::size_t {
  kU = 0,
  kDu = 1,
  kDirichlet = 2,  ///< 2 pi int_0^r (u')^2 s ds            (no weight)
  kMass = 3,       ///< 2 pi int_0^r mass_density(u) w s ds
  kNehari = 4,     ///< 2 pi int_0^r u f(u) w s ds
  kUsq = 5,        ///< 2 pi int_0^r u^2 w s ds
};
inline constexpr std::size_t kStateSize = 6;
using State = std::array<double, kStateSize>;

/// Continuous extension of one accepted step:
/// y(theta) = c0 + theta (c1 + (1-theta)(c2 + theta (c3 + (1-theta) c4))).
struct DenseSegment {
  double r_start = 0.0;
  double h = 0.0;
  std::array<State, 5> coeff{};
};

/// Even expansion used on [0, r0]: u = alpha + c2 r^2 + c4 r^4.
struct StartupSeries {
  double c2 = 0.0;
  double c4 = 0.0;
  double mass0 = 0.0;    ///< mass_density(alpha) w(0)
  double nehari0 = 0.0;  ///< nehari_density(alpha) w(0)
  double usq0 = 0.0;     ///< alpha^2 w(0)
};

/// Dense trajectory of one (problem, lambda, alpha) up to its first zero.
/// grid[0] = 0, grid[1] = startup radius, grid.back() = boundary_radius.
/// segments[i] covers [grid[i+1], grid[i+2]]; [0, grid[1]] uses the startup series.
struct RadialSolution {
  ProblemSpec problem;
  double lambda = 0.0;
  double alpha = 0.0;
  std::vector<double> grid;
  std::vector<State> nodes;
  std::vector<DenseSegment> segments;
  StartupSeries startup;
  double boundary_radius = 0.0;
  double du_at_boundary = 0.0;

  std::vector<double> column(Component c) const;
  const State& final_state() const { return nodes.back(); }

  /// Image under r -> k r with lambda -> lambda / k^2 (scale-covariant
  /// problems only). Node values map exactly up to rounding of the factor.
  RadialSolution rescaled(double k) const;
};

// ---------------------------------------------------------------------------
// Branch and residual records
// ---------------------------------------------------------------------------

struct ResidualSummary {
  double pohozaev = 0.0;  ///< max relative residual; NaN when not applicable
  double nehari = 0.0;
  double max() const;
};

struct BranchPoint {
  double alpha = 0.0;
  double lambda = 0.0;
  double Lambda = 0.0;  ///< Dirichlet energy, equal to the hyperbolic one by conformal invariance
  double energy = 0.0;  ///< I_lambda(u)
  double du_at_boundary = 0.0;
  double sup_u = 0.0;
  ResidualSummary residual;
};

struct ResidualReport {
  std::string identity;
  std::vector<double> radii;
  std::vector<double> absolute;
  std::vector<double> relative;
  double max_relative = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Energy functional value of a computed solution:
/// (Lambda - shift * |u|_2^2)/2 - lambda/2 * int mass_density(u) w.
double energy_of(const RadialSolution& s);

}  // namespace tmlab
