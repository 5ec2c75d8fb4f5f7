#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmlab/integrate.hpp"
#include "tmlab/model.hpp"

namespace tmlab {

struct AlphaGrid {
  double alpha_min = 0.05;
  double alpha_max = 6.0;
  int points = 200;
  bool log_spaced = true;

  /// Strictly increasing grid; endpoints are exact.
  std::vector<double> values() const;
  std::string describe() const;
};

struct BranchTable {
  ProblemSpec problem;
  std::vector<BranchPoint> points;  ///< increasing alpha
  AlphaGrid grid;
  IntegratorConfig config;
  std::string config_hash;
  /// First eigenvalue of the problem's operator, when one bounds lambda.
  std::optional<double> mu1;

  bool residuals_pass(double tolerance) const;
};

/// Hash of everything that determines a branch table's contents.
std::string branch_config_hash(const ProblemSpec& problem, const AlphaGrid& grid,
                               const IntegratorConfig& config);

/// One point of the branch: lambda_of_alpha plus the derived quantities.
BranchPoint branch_point(const ProblemSpec& problem, double alpha, const IntegratorConfig& config,
                         std::optional<double> lambda_upper);

/// Reference implementation: grid points in order on the calling thread.
BranchTable trace_branch_serial(const ProblemSpec& problem, const AlphaGrid& grid,
                                const IntegratorConfig& config = {});

/// Same table computed by an OpenMP parallel map over grid indices. The result
/// is bit-identical to trace_branch_serial. On failure the error of the lowest
/// failing index is rethrown, annotated with that index.
BranchTable trace_branch(const ProblemSpec& problem, const AlphaGrid& grid,
                         const IntegratorConfig& config = {});

struct GammaStar {
  double gamma_star = 0.0;
  double alpha_at_max = 0.0;
  std::size_t index = 0;  ///< discrete argmax
};

/// Interior maximum of Lambda along the table, refined by a parabola through
/// the argmax and its neighbours in log(alpha). RangeError at an endpoint.
GammaStar gamma_star(const BranchTable& table);

struct Crossing {
  double alpha = 0.0;
  double lambda = 0.0;
  double Lambda = 0.0;
};

struct CriticalPointCount {
  int count = 0;
  std::vector<Crossing> crossings;
};

/// Solutions with Dirichlet energy gamma: every sign change of Lambda - gamma
/// along the table, each refined on alpha. AmbiguousCount when gamma is within
/// the table's resolution of its maximum.
CriticalPointCount count_critical_points(const BranchTable& table, double gamma);

struct QuantizationPoint {
  double alpha = 0.0;
  double lambda = 0.0;
  double Lambda = 0.0;
  double energy = 0.0;
  double r_half = 0.0;  ///< radius where the Dirichlet accumulator reaches Lambda / 2
};

struct QuantizationReport {
  std::vector<QuantizationPoint> points;
  bool lambda_decreasing = false;
  bool gap_decreasing = false;  ///< |Lambda - 4 pi| decreasing
  bool r_half_decreasing = false;
  bool energy_increasing = false;
  bool energy_below_2pi = false;
  /// Lambda(alpha) ~ L + C alpha^{-p} through the last three points.
  double extrapolated_limit = 0.0;
  double fitted_order = 0.0;
  std::vector<std::string> diagnostics;
};

/// Blow-up regime of the branch. Tail values must be >= 3 and increasing.
QuantizationReport quantization_report(const ProblemSpec& problem,
                                       const std::vector<double>& alpha_tail,
                                       const IntegratorConfig& config = {});

/// Radius where the Dirichlet accumulator reaches half its final value.
double half_energy_radius(const RadialSolution& solution);

struct PerturbedBound {
  BranchTable table;
  double max_Lambda = 0.0;
  double alpha_at_max = 0.0;
  double margin = 0.0;  ///< 8 pi - max_Lambda
  double min_energy_minus_quarter = 0.0;  ///< min over points of I - Lambda / 4
  bool energy_band = false;  ///< 0 < I < 2 pi at every point
};

/// Branch of the perturbed problem on the unit disc and its energy bounds.
PerturbedBound perturbed_energy_bound(const AlphaGrid& grid, const IntegratorConfig& config = {});

}  // namespace tmlab
