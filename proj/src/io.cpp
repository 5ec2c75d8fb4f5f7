#include "tmlab/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "tmlab/errors.hpp"
#include "tmlab/hash.hpp"

namespace tmlab::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g17(double x) { return fmt::format("{:.17g}", x); }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_double(std::string_view field, std::size_t line) {
  const std::string tmp(field);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size())
    throw ValidationError(fmt::format("line {}: not a number: '{}'", line, tmp));
  return v;
}

json nan_to_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string branch_csv(const std::vector<BranchPoint>& points) {
  std::string out = fmt::format("# schema_version={}\n{}\n", kSchemaVersion, kBranchHeader);
  for (const BranchPoint& p : points)
    out += fmt::format("{},{},{},{},{},{},{}\n", g17(p.alpha), g17(p.lambda), g17(p.Lambda),
                       g17(p.energy), g17(p.du_at_boundary), g17(p.residual.pohozaev),
                       g17(p.residual.nehari));
  return out;
}

std::vector<BranchPoint> parse_branch_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ValidationError("empty branch CSV");

  constexpr std::string_view tag = "# schema_version=";
  if (lines[0].substr(0, tag.size()) != tag)
    throw ValidationError("branch CSV lacks a schema_version line");
  const std::string_view version = lines[0].substr(tag.size());
  if (version.substr(0, version.find('.')) != "1")
    throw ValidationError(fmt::format("unsupported schema_version {}", version));
  if (lines.size() < 2 || lines[1] != kBranchHeader)
    throw ValidationError("branch CSV header does not match");

  std::vector<BranchPoint> out;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 7)
      throw ValidationError(fmt::format("line {}: expected 7 fields, got {}", i + 1, f.size()));
    BranchPoint p;
    p.alpha = parse_double(f[0], i + 1);
    p.lambda = parse_double(f[1], i + 1);
    p.Lambda = parse_double(f[2], i + 1);
    p.energy = parse_double(f[3], i + 1);
    p.du_at_boundary = parse_double(f[4], i + 1);
    p.residual.pohozaev = parse_double(f[5], i + 1);
    p.residual.nehari = parse_double(f[6], i + 1);
    p.sup_u = p.alpha;
    out.push_back(p);
  }
  return out;
}

json point_json(const BranchPoint& p) {
  return {{"alpha", p.alpha},
          {"lambda", p.lambda},
          {"Lambda", p.Lambda},
          {"energy", p.energy},
          {"du_boundary", p.du_at_boundary},
          {"res_pohozaev", nan_to_null(p.residual.pohozaev)},
          {"res_nehari", nan_to_null(p.residual.nehari)}};
}

json branch_json(const BranchTable& t) {
  json pts = json::array();
  for (const auto& p : t.points) pts.push_back(point_json(p));
  json j{{"schema_version", kSchemaVersion},
         {"problem", t.problem.describe()},
         {"grid", t.grid.describe()},
         {"config_hash", t.config_hash},
         {"points", pts}};
  if (t.mu1) j["mu1"] = *t.mu1;
  return j;
}

json solution_json(const RadialSolution& s, double defining_residual) {
  const State& y = s.final_state();
  const ResidualReport neh = nehari_residual(s);
  json poh = nullptr;
  if (s.problem.is_euclidean()) poh = pohozaev_residual(s, {s.boundary_radius}).max_relative;
  return {{"schema_version", kSchemaVersion},
          {"problem", s.problem.describe()},
          {"lambda", s.lambda},
          {"alpha", s.alpha},
          {"Lambda", y[kDirichlet]},
          {"energy", energy_of(s)},
          {"du_boundary", s.du_at_boundary},
          {"boundary_radius", s.boundary_radius},
          {"residuals",
           {{"pohozaev", poh}, {"nehari", neh.max_relative}, {"defining", defining_residual}}}};
}

json report_json(const ResidualReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.radii.size(); ++i)
    rows.push_back({{"r", r.radii[i]}, {"absolute", r.absolute[i]}, {"relative", r.relative[i]}});
  return {{"identity", r.identity},
          {"max_relative", r.max_relative},
          {"tolerance", r.tolerance},
          {"pass", r.pass},
          {"radii", rows}};
}

json certificate_json(const series::Certificate& c) {
  return {{"schema_version", kSchemaVersion},
          {"common_factor", c.common_factor.str()},
          {"lhs_eps4", c.lhs_eps4.str()},
          {"rhs_eps4", c.rhs_eps4.str()},
          {"lhs_eps5", c.lhs_eps5_over_k.str()},
          {"rhs_eps5", c.rhs_eps5_over_k.str()},
          {"lhs_eps5_expanded", c.lhs_eps5.str()},
          {"rhs_eps5_expanded", c.rhs_eps5.str()},
          {"i_eps5", c.i_eps5_over_k.str()},
          {"ii_eps5", c.ii_eps5_over_k.str()},
          {"eps4_agree", c.eps4_agree},
          {"lower_orders_agree", c.lower_orders_agree},
          {"mismatch", c.mismatch},
          {"printed",
           {{"lhs_eps5", c.printed_lhs_eps5_over_k.get_str()},
            {"rhs_eps5", c.printed_rhs_eps5_over_k.get_str()},
            {"i_eps5", c.printed_i_eps5_over_k.get_str()}}},
          {"verdict", c.verdict}};
}

json pair_report_json(const series::PairReport& r) {
  json rel = json::array();
  for (const auto& x : r.relations)
    rel.push_back({{"k", x.k},
                   {"difference", x.difference.str()},
                   {"printed", x.printed.str()},
                   {"discrepancy", x.discrepancy.str()},
                   {"quotient", x.quotient.str()},
                   {"remainder", x.remainder.str()},
                   {"matches_at_unit_lambda", x.matches_at_unit_lambda},
                   {"t_form_consistent", x.t_form_consistent},
                   {"vanishes_on_diagonal", x.vanishes_on_diagonal}});
  return {{"schema_version", kSchemaVersion},
          {"relations", rel},
          {"r1_holds", r.r1_holds},
          {"r2_matches_printed", r.r2_matches_printed},
          {"t2_matches_printed", r.t2_matches_printed},
          {"sixth_order_residual", r.sixth_order_residual.str()}};
}

void check_schema(const json& j) {
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_string())
    throw ValidationError("object lacks a schema_version");
  const std::string v = j["schema_version"];
  if (v.substr(0, v.find('.')) != "1")
    throw ValidationError("unsupported schema_version " + v);
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ValidationError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path BranchCache::entry(const std::string& key) const { return dir_ / ("branch-" + key + ".csv"); }

std::optional<std::string> BranchCache::load(const std::string& key) const {
  const fs::path data = entry(key), sum = data.string() + ".fnv";
  std::error_code ec;
  if (!fs::exists(data, ec) || !fs::exists(sum, ec)) return std::nullopt;
  try {
    std::string content = read_file(data);
    std::string recorded = read_file(sum);
    while (!recorded.empty() && (recorded.back() == '\n' || recorded.back() == ' '))
      recorded.pop_back();
    if (recorded != hex64(fnv1a64(content))) return std::nullopt;
    parse_branch_csv(content);
    return content;
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

void BranchCache::store(const std::string& key, std::string_view csv) const {
  const fs::path data = entry(key);
  write_file_atomic(data, csv);
  write_file_atomic(data.string() + ".fnv", hex64(fnv1a64(csv)) + "\n");
}

namespace {

struct Panel {
  double x0, y0, w, h;  // pixel box
  double xmin, xmax, ymin, ymax;
  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void draw_panel(std::string& svg, const Panel& p, const std::vector<std::pair<double, double>>& xy,
                const std::string& xlabel) {
  svg += fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="none" stroke="#333"/>)"
                     "\n",
                     p.x0, p.y0, p.w, p.h);
  for (const auto& [level, name] : {std::pair{4.0 * M_PI, "4π"}, std::pair{8.0 * M_PI, "8π"}}) {
    const double y = p.py(level);
    svg += fmt::format(
        R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="#c33" stroke-dasharray="6 4"/>)"
        "\n",
        p.x0, y, p.x0 + p.w, y);
    svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="12" fill="#c33">{}</text>)" "\n",
                       p.x0 + p.w - 24, y - 4, name);
  }
  std::string pts;
  for (const auto& [x, y] : xy) pts += fmt::format("{:.3f},{:.3f} ", p.px(x), p.py(y));
  if (!pts.empty()) pts.pop_back();
  svg += fmt::format(R"(<polyline fill="none" stroke="#1f5fbf" stroke-width="1.5" points="{}"/>)" "\n",
                     pts);
  svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="13" text-anchor="middle">{}</text>)" "\n",
                     p.x0 + 0.5 * p.w, p.y0 + p.h + 32, xlabel);
  svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11" text-anchor="middle">{:.4g}</text>)" "\n",
                     p.x0, p.y0 + p.h + 15, p.xmin);
  svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11" text-anchor="middle">{:.4g}</text>)" "\n",
                     p.x0 + p.w, p.y0 + p.h + 15, p.xmax);
  svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11" text-anchor="end">{:.4g}</text>)" "\n",
                     p.x0 - 4, p.y0 + p.h, p.ymin);
  svg += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11" text-anchor="end">{:.4g}</text>)" "\n",
                     p.x0 - 4, p.y0 + 10, p.ymax);
  svg += fmt::format(
      R"svg(<text x="{:.2f}" y="{:.2f}" font-size="13" text-anchor="middle" transform="rotate(-90 {:.2f} {:.2f})">Λ</text>)svg"
      "\n",
      p.x0 - 30, p.y0 + 0.5 * p.h, p.x0 - 30, p.y0 + 0.5 * p.h);
}

}  // namespace

std::string branch_svg(const std::vector<BranchPoint>& points) {
  if (points.empty()) throw ValidationError("branch table is empty; nothing to plot");
  double lmax = 0.0, amax = 0.0, Lmax = 8.0 * M_PI;
  for (const auto& p : points) {
    if (!std::isfinite(p.lambda) || !std::isfinite(p.Lambda) || !std::isfinite(p.alpha))
      throw ValidationError("branch table contains non-finite values");
    lmax = std::max(lmax, p.lambda);
    amax = std::max(amax, p.alpha);
    Lmax = std::max(Lmax, p.Lambda);
  }
  std::vector<std::pair<double, double>> by_lambda, by_alpha;
  for (const auto& p : points) {
    by_lambda.emplace_back(p.lambda, p.Lambda);
    by_alpha.emplace_back(p.alpha, p.Lambda);
  }
  const double ytop = 1.05 * Lmax;
  std::string svg =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"420\" "
      "viewBox=\"0 0 960 420\">\n<rect width=\"960\" height=\"420\" fill=\"white\"/>\n";
  draw_panel(svg, Panel{60, 20, 400, 340, 0.0, 1.05 * lmax, 0.0, ytop}, by_lambda, "λ");
  draw_panel(svg, Panel{540, 20, 400, 340, 0.0, 1.05 * amax, 0.0, ytop}, by_alpha, "α = u(0)");
  svg += "</svg>\n";
  return svg;
}

}  // namespace tmlab::io
