// tmlab: command-line front end for the radial solver, branch tracer and
// boundary-expansion checker.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tmlab/branch.hpp"
#include "tmlab/eigen.hpp"
#include "tmlab/errors.hpp"
#include "tmlab/identities.hpp"
#include "tmlab/integrate.hpp"
#include "tmlab/io.hpp"
#include "tmlab/proof.hpp"
#include "tmlab/shoot.hpp"

namespace {

using namespace tmlab;
using nlohmann::json;

struct ProblemFlags {
  std::string geometry = "euclid";
  double radius = 1.0;
  std::string nonlinearity = "standard";
  double shift = 0.0;
  double tol = 1e-10;

  void attach(CLI::App* cmd) {
    cmd->add_option("--problem", geometry, "euclid or hyper")
        ->check(CLI::IsMember({"euclid", "hyper"}))
        ->capture_default_str();
    cmd->add_option("--radius", radius, "disc radius, or geodesic radius R for hyper")
        ->capture_default_str();
    cmd->add_option("--nonlinearity", nonlinearity, "standard, perturbed or shifted")
        ->check(CLI::IsMember({"standard", "perturbed", "shifted"}))
        ->capture_default_str();
    cmd->add_option("--shift", shift, "lambda_shift for the shifted nonlinearity")
        ->capture_default_str();
    cmd->add_option("--tol", tol, "integrator relative tolerance (abs = tol / 100)")
        ->capture_default_str();
  }

  ProblemSpec problem() const {
    Geometry g = geometry == "hyper" ? Geometry{HyperbolicBall{radius}} : Geometry{EuclideanDisc{radius}};
    Nonlinearity n = Nonlinearity::standard();
    if (nonlinearity == "perturbed") n = Nonlinearity::perturbed();
    if (nonlinearity == "shifted") n = Nonlinearity::shifted(shift);
    if (nonlinearity != "shifted" && shift != 0.0)
      throw ValidationError("--shift requires --nonlinearity shifted");
    return ProblemSpec::make(g, n);
  }

  IntegratorConfig config() const {
    IntegratorConfig c;
    c.rel_tol = tol;
    c.abs_tol = tol * 1e-2;
    c.validate();
    return c;
  }
};

struct GridFlags {
  AlphaGrid grid;
  bool linear = false;
  void attach(CLI::App* cmd) {
    cmd->add_option("--alpha-min", grid.alpha_min)->capture_default_str();
    cmd->add_option("--alpha-max", grid.alpha_max)->capture_default_str();
    cmd->add_option("--points", grid.points)->capture_default_str();
    cmd->add_flag("--linear-grid", linear, "uniform instead of log-spaced alpha grid");
  }
  AlphaGrid get() const {
    AlphaGrid g = grid;
    g.log_spaced = !linear;
    return g;
  }
};

struct Shared {
  std::string cache_dir;
  std::string format = "json";
  std::string output;
};

void emit(const Shared& sh, const std::string& text) {
  if (sh.output.empty() || sh.output == "-")
    std::cout << text;
  else
    io::write_file_atomic(sh.output, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

BranchTable branch_with_cache(const ProblemSpec& problem, const AlphaGrid& grid,
                              const IntegratorConfig& cfg, const std::string& cache_dir,
                              bool serial, std::string* csv_out) {
  const std::string key = branch_config_hash(problem, grid, cfg);
  std::optional<io::BranchCache> cache;
  if (!cache_dir.empty()) cache.emplace(cache_dir);
  if (cache) {
    if (auto hit = cache->load(key)) {
      BranchTable t;
      t.problem = problem;
      t.grid = grid;
      t.config = cfg;
      t.config_hash = key;
      t.points = io::parse_branch_csv(*hit);
      if (problem.kind() != NonlinearityKind::Perturbed) t.mu1 = first_eigenvalue(problem, cfg).mu1;
      if (csv_out) *csv_out = std::move(*hit);
      return t;
    }
  }
  BranchTable t = serial ? trace_branch_serial(problem, grid, cfg) : trace_branch(problem, grid, cfg);
  std::string csv = io::branch_csv(t.points);
  if (cache) cache->store(key, csv);
  if (csv_out) *csv_out = std::move(csv);
  return t;
}

json gamma_json(const BranchTable& t) {
  try {
    const GammaStar g = gamma_star(t);
    return {{"gamma_star", g.gamma_star}, {"alpha_at_max", g.alpha_at_max}};
  } catch (const RangeError& e) {
    return {{"gamma_star", nullptr}, {"note", e.what()}};
  }
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive radial solutions of -Δu = λ u e^{u²}: shooting, branches, identities"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file; [solve], [branch], ... sections per command");
  Shared sh;
  if (const char* env = std::getenv("TMLAB_CACHE_DIR")) sh.cache_dir = env;
  app.add_option("--cache-dir", sh.cache_dir, "branch cache directory (env TMLAB_CACHE_DIR)");
  app.add_option("--format", sh.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", sh.output, "write to a file instead of stdout");

  ProblemFlags pf;
  GridFlags gf;

  auto* solve = app.add_subcommand("solve", "solve for one lambda or one alpha");
  pf.attach(solve);
  std::optional<double> lambda_in, alpha_in;
  auto* o_lambda = solve->add_option("--lambda", lambda_in, "prescribed lambda (theta when shifted)");
  auto* o_alpha = solve->add_option("--alpha", alpha_in, "prescribed u(0)");
  o_lambda->excludes(o_alpha);

  auto* branch = app.add_subcommand("branch", "trace the branch alpha -> (lambda, Lambda, I)");
  ProblemFlags pf_b;
  GridFlags gf_b;
  bool serial = false;
  pf_b.attach(branch);
  gf_b.attach(branch);
  branch->add_flag("--serial", serial, "use the single-threaded reference tracer");

  auto* quantize = app.add_subcommand("quantize", "blow-up tail: Lambda -> 4 pi, r_half -> 0");
  ProblemFlags pf_q;
  std::vector<double> tail{4.0, 4.5, 5.0, 5.5, 6.0};
  pf_q.attach(quantize);
  quantize->add_option("--alphas", tail, "tail alphas, increasing and >= 3")->delimiter(',');

  auto* count = app.add_subcommand("count", "count solutions with Dirichlet energy gamma");
  ProblemFlags pf_c;
  GridFlags gf_c;
  double gamma = 0.0;
  pf_c.attach(count);
  gf_c.attach(count);
  count->add_option("--gamma", gamma, "target Dirichlet energy")->required();

  auto* eigen = app.add_subcommand("eigen", "first Dirichlet eigenvalue of the weighted operator");
  ProblemFlags pf_e;
  pf_e.attach(eigen);

  auto* ident = app.add_subcommand("identities", "Pohozaev / Nehari residuals and boundary data");
  ProblemFlags pf_i;
  pf_i.attach(ident);
  std::optional<double> i_lambda, i_alpha, i_compare;
  std::vector<double> radii{0.25, 0.5, 0.75, 1.0};
  auto* io_l = ident->add_option("--lambda", i_lambda);
  auto* io_a = ident->add_option("--alpha", i_alpha);
  io_l->excludes(io_a);
  ident->add_option("--radii", radii, "radii as fractions of the boundary radius")->delimiter(',');
  ident->add_option("--compare-alpha", i_compare, "second branch solution for comparison data");

  auto* prooflab = app.add_subcommand("prooflab", "exact boundary-expansion certificate");

  auto* plot = app.add_subcommand("plot", "SVG of a branch CSV");
  std::string plot_in;
  plot->add_option("--input", plot_in, "branch CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("ValidationError", e.what(), 2);
  }

  try {
    if (*solve) {
      if (!lambda_in && !alpha_in) throw ValidationError("solve needs exactly one of --lambda/--alpha");
      const ProblemSpec problem = pf.problem();
      const IntegratorConfig cfg = pf.config();
      RadialSolution s = alpha_in ? lambda_of_alpha(problem, *alpha_in, cfg).solution
                                  : solve_for_lambda(problem, *lambda_in, cfg);
      emit(sh, dump(io::solution_json(s, defining_residual(s))));
    } else if (*branch) {
      std::string csv;
      const BranchTable t = branch_with_cache(pf_b.problem(), gf_b.get(), pf_b.config(),
                                              sh.cache_dir, serial, &csv);
      emit(sh, sh.format == "csv" ? csv : dump(io::branch_json(t)));
    } else if (*quantize) {
      const QuantizationReport q = quantization_report(pf_q.problem(), tail, pf_q.config());
      json pts = json::array();
      for (const auto& p : q.points)
        pts.push_back({{"alpha", p.alpha},
                       {"lambda", p.lambda},
                       {"Lambda", p.Lambda},
                       {"energy", p.energy},
                       {"r_half", p.r_half}});
      emit(sh, dump({{"schema_version", io::kSchemaVersion},
                     {"problem", pf_q.problem().describe()},
                     {"points", pts},
                     {"lambda_decreasing", q.lambda_decreasing},
                     {"gap_decreasing", q.gap_decreasing},
                     {"r_half_decreasing", q.r_half_decreasing},
                     {"energy_increasing", q.energy_increasing},
                     {"energy_below_2pi", q.energy_below_2pi},
                     {"extrapolated_limit", q.extrapolated_limit},
                     {"fitted_order", q.fitted_order},
                     {"four_pi", 4.0 * M_PI},
                     {"diagnostics", q.diagnostics}}));
    } else if (*count) {
      const BranchTable t = branch_with_cache(pf_c.problem(), gf_c.get(), pf_c.config(),
                                              sh.cache_dir, false, nullptr);
      const CriticalPointCount c = count_critical_points(t, gamma);
      if (sh.format == "csv") {
        std::string out = fmt::format("# schema_version={}\n# count={}\nalpha,lambda,Lambda\n",
                                      io::kSchemaVersion, c.count);
        for (const auto& x : c.crossings)
          out += fmt::format("{:.17g},{:.17g},{:.17g}\n", x.alpha, x.lambda, x.Lambda);
        emit(sh, out);
      } else {
        json xs = json::array();
        for (const auto& x : c.crossings)
          xs.push_back({{"alpha", x.alpha}, {"lambda", x.lambda}, {"Lambda", x.Lambda}});
        emit(sh, dump({{"schema_version", io::kSchemaVersion},
                       {"problem", t.problem.describe()},
                       {"gamma", gamma},
                       {"count", c.count},
                       {"crossings", xs},
                       {"branch", gamma_json(t)}}));
      }
    } else if (*eigen) {
      const ProblemSpec problem = pf_e.problem();
      const EigenResult e = first_eigenvalue(problem, pf_e.config());
      emit(sh, dump({{"schema_version", io::kSchemaVersion},
                     {"problem", problem.describe()},
                     {"mu1", e.mu1},
                     {"iterations", e.iterations}}));
    } else if (*ident) {
      if (!i_lambda && !i_alpha) throw ValidationError("identities needs one of --lambda/--alpha");
      const ProblemSpec problem = pf_i.problem();
      const IntegratorConfig cfg = pf_i.config();
      const RadialSolution s = i_alpha ? lambda_of_alpha(problem, *i_alpha, cfg).solution
                                       : solve_for_lambda(problem, *i_lambda, cfg);
      json out{{"schema_version", io::kSchemaVersion},
               {"solution", io::solution_json(s, defining_residual(s))},
               {"nehari", io::report_json(nehari_residual(s))}};
      std::vector<double> rs;
      for (double f : radii) {
        if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("--radii must lie in [0, 1]");
        rs.push_back(f * s.boundary_radius);
      }
      try {
        out["pohozaev"] = io::report_json(pohozaev_residual(s, rs));
      } catch (const UnsupportedIdentity& e) {
        out["pohozaev"] = {{"unsupported", e.what()}};
      }
      try {
        const BoundaryDerivatives bd = boundary_derivatives(s);
        out["boundary_derivatives"] = {{"values", bd.values},
                                       {"fd_second", bd.fd_second},
                                       {"fd_third", bd.fd_third},
                                       {"fd_rel_second", bd.fd_rel_second},
                                       {"fd_rel_third", bd.fd_rel_third},
                                       {"flagged", bd.flagged}};
      } catch (const UnsupportedIdentity& e) {
        out["boundary_derivatives"] = {{"unsupported", e.what()}};
      }
      if (i_compare) {
        const RadialSolution o = lambda_of_alpha(problem, *i_compare, cfg).solution;
        const ComparisonReport c = comparison_diagnostics(s, o);
        out["comparison"] = {{"alpha_lo", c.alpha_lo},
                             {"alpha_hi", c.alpha_hi},
                             {"intersections", c.intersections},
                             {"crossing_x", c.crossing_x},
                             {"ratio_increasing", c.ratio_increasing},
                             {"ratio_decreasing", c.ratio_decreasing},
                             {"ratio_turns", c.ratio_turns},
                             {"ratio_min", c.ratio_min},
                             {"ratio_max", c.ratio_max},
                             {"t", c.t},
                             {"xi", c.xi},
                             {"contact_case", std::string(1, c.contact_case)}};
      }
      emit(sh, dump(out));
    } else if (*prooflab) {
      json out = io::certificate_json(series::contradiction_certificate());
      out["pair_relations"] = io::pair_report_json(series::verify_pair_relations());
      emit(sh, dump(out));
    } else if (*plot) {
      const auto points = io::parse_branch_csv(io::read_file(plot_in));
      const std::string svg = io::branch_svg(points);
      if (sh.output.empty() || sh.output == "-")
        std::cout << svg;
      else
        io::write_file_atomic(sh.output, svg);
    }
  } catch (const ValidationError& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const SolverError& e) {
    return fail(e.kind(), e.what(), 3);
  } catch (const std::exception& e) {
    return fail("Error", e.what(), 3);
  }
  return 0;
}
