#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tmlab/branch.hpp"
#include "tmlab/identities.hpp"
#include "tmlab/model.hpp"
#include "tmlab/proof.hpp"

namespace tmlab::io {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kBranchHeader =
    "alpha,lambda,Lambda,energy,du_boundary,res_pohozaev,res_nehari";

/// "# schema_version=1.0", the fixed header, then one row per point, %.17g.
std::string branch_csv(const std::vector<BranchPoint>& points);

/// Inverse of branch_csv. Rejects a missing or unknown-major schema line, a
/// different header and malformed rows with ValidationError.
std::vector<BranchPoint> parse_branch_csv(std::string_view text);

nlohmann::json point_json(const BranchPoint& p);
nlohmann::json branch_json(const BranchTable& table);
nlohmann::json solution_json(const RadialSolution& s, double defining_residual);
nlohmann::json report_json(const ResidualReport& r);
nlohmann::json certificate_json(const series::Certificate& c);
nlohmann::json pair_report_json(const series::PairReport& r);

/// Rejects objects whose schema_version has an unknown major number.
void check_schema(const nlohmann::json& j);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Directory of branch CSVs keyed by config hash. Each entry has a checksum
/// sidecar; an entry whose checksum does not match is treated as absent.
class BranchCache {
 public:
  explicit BranchCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<std::string> load(const std::string& key) const;
  void store(const std::string& key, std::string_view csv) const;
  std::filesystem::path entry(const std::string& key) const;

 private:
  std::filesystem::path dir_;
};

/// Static SVG with (lambda, Lambda) and (alpha, Lambda) panels and reference
/// lines at 4 pi and 8 pi. ValidationError on an empty table.
std::string branch_svg(const std::vector<BranchPoint>& points);

}  // namespace tmlab::io
