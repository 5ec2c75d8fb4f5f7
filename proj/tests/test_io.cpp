#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "tmlab/errors.hpp"
#include "tmlab/hash.hpp"
#include "tmlab/io.hpp"
#include "tmlab/shoot.hpp"

using namespace tmlab;
namespace fs = std::filesystem;

namespace {

std::vector<BranchPoint> small_branch() {
  AlphaGrid g;
  g.points = 7;
  return trace_branch(ProblemSpec{}, g).points;
}

fs::path scratch(const char* name) {
  const fs::path d = fs::temp_directory_path() /
                     ("tmlab-test-" + std::string(name) + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("csv roundtrip is exact") {
    const auto pts = small_branch();
    const std::string csv = io::branch_csv(pts);
    CHECK(csv.rfind("# schema_version=1.0\nalpha,lambda,Lambda,energy,du_boundary,res_pohozaev,res_nehari\n",
                    0) == 0);
    const auto back = io::parse_branch_csv(csv);
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(back[i].alpha == pts[i].alpha);
      CHECK(back[i].lambda == pts[i].lambda);
      CHECK(back[i].Lambda == pts[i].Lambda);
      CHECK(back[i].energy == pts[i].energy);
      CHECK(back[i].du_at_boundary == pts[i].du_at_boundary);
    }
    CHECK(io::branch_csv(back) == csv);
  }

  TEST_CASE("csv rejects malformed input") {
    const std::string head = "alpha,lambda,Lambda,energy,du_boundary,res_pohozaev,res_nehari\n";
    CHECK_THROWS_AS(io::parse_branch_csv(""), ValidationError);
    CHECK_THROWS_AS(io::parse_branch_csv(head + "1,2,3,4,5,6,7\n"), ValidationError);
    CHECK_THROWS_AS(io::parse_branch_csv("# schema_version=2.0\n" + head), ValidationError);
    CHECK_THROWS_AS(io::parse_branch_csv("# schema_version=1.0\nalpha,lambda\n"), ValidationError);
    CHECK_THROWS_AS(io::parse_branch_csv("# schema_version=1.0\n" + head + "1,2,3\n"), ValidationError);
    CHECK_THROWS_AS(io::parse_branch_csv("# schema_version=1.0\n" + head + "1,2,3,4,5,6,x\n"),
                    ValidationError);
    CHECK(io::parse_branch_csv("# schema_version=1.3\n" + head).empty());
  }

  TEST_CASE("json schema") {
    const auto s = lambda_of_alpha(ProblemSpec{}, 1.0).solution;
    const auto j = io::solution_json(s, defining_residual(s));
    for (const char* k : {"schema_version", "problem", "lambda", "alpha", "Lambda", "energy",
                          "du_boundary", "residuals"})
      CHECK(j.contains(k));
    for (const char* k : {"pohozaev", "nehari", "defining"}) CHECK(j["residuals"].contains(k));
    CHECK_NOTHROW(io::check_schema(j));
    auto bumped = j;
    bumped["schema_version"] = "2.0";
    CHECK_THROWS_AS(io::check_schema(bumped), ValidationError);
    CHECK_THROWS_AS(io::check_schema(nlohmann::json::object()), ValidationError);
    // hyperbolic solutions carry no Pohozaev value
    const auto h = lambda_of_alpha(ProblemSpec::make(HyperbolicBall{1.0}, Nonlinearity::standard()), 1.0);
    CHECK(io::solution_json(h.solution, 0.0)["residuals"]["pohozaev"].is_null());
  }

  TEST_CASE("atomic write and cache") {
    const fs::path dir = scratch("cache");
    io::BranchCache cache(dir);
    const std::string csv = io::branch_csv(small_branch());
    CHECK_FALSE(cache.load("k1"));
    cache.store("k1", csv);
    const auto hit = cache.load("k1");
    REQUIRE(hit);
    CHECK(*hit == csv);
    for (const auto& e : fs::directory_iterator(dir))
      CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
    // corrupt the entry: the checksum no longer matches
    {
      std::ofstream out(cache.entry("k1"), std::ios::app);
      out << "0.1,0.2,0.3,0.4,0.5,0.6,0.7\n";
    }
    CHECK_FALSE(cache.load("k1"));
    fs::remove_all(dir);
  }

  TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
  }

  TEST_CASE("svg") {
    const auto svg = io::branch_svg(small_branch());
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("4π") != std::string::npos);
    CHECK(svg.find("8π") != std::string::npos);
    CHECK_THROWS_AS(io::branch_svg({}), ValidationError);
  }
}
