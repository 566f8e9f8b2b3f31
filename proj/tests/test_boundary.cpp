#include <catch_amalgamated.hpp>

#include "evasion/boundary.hpp"

using namespace evasion;

namespace {

GridSpec grid(const Scenario& s) { return make_grid_cells(s, 128, 256); }

AnalysisConfig quiet() {
  AnalysisConfig cfg;
  cfg.element_cap = 0;
  cfg.witness_cap = 0;
  return cfg;
}

}  // namespace

TEST_CASE("boundary reconstruction reproduces the builtins") {
  for (const char* name : {"split", "close", "annuli", "empty", "full"}) {
    const Scenario s = builtin_scenario(name);
    const DirectAnalysis da = run_direct(s, grid(s), quiet());
    const BoundaryData bd = extract_boundary_data(da);
    INFO(name);
    CHECK(matches_direct(reconstruct_algebras(bd), da.decomposition));
    CHECK(analyze_boundary(bd).limit_cardinality == da.report.limit_cardinality);
  }
}

TEST_CASE("boundary-only fibers report loops from the boundary count") {
  const Scenario s = builtin_scenario("annuli");
  const DirectAnalysis da = run_direct(s, grid(s), quiet());
  const AnalysisReport r = analyze_boundary(extract_boundary_data(da));
  REQUIRE(r.fibers.size() == da.report.fibers.size());
  for (std::size_t i = 0; i < r.fibers.size(); ++i) {
    CHECK(r.fibers[i].pi0 == da.report.fibers[i].pi0);
    CHECK(r.fibers[i].b1 == da.report.fibers[i].b1);
  }
}

TEST_CASE("boundary data round-trips through JSON") {
  const Scenario s = builtin_scenario("split");
  const BoundaryData bd = extract_boundary_data(s, grid(s));
  const BoundaryData back = boundary_from_json(nlohmann::json::parse(boundary_to_json(bd).dump()));
  CHECK(boundary_to_json(back) == boundary_to_json(bd));
  CHECK(analyze_boundary(back).limit_cardinality.value == 2);
}

TEST_CASE("malformed boundary data is rejected") {
  const Scenario s = builtin_scenario("split");
  const auto good = boundary_to_json(extract_boundary_data(s, grid(s)));
  auto doc = good;
  doc["shape"] = "torus";
  CHECK_THROWS_AS(boundary_from_json(doc), Error);
  doc = good;
  doc["cobordisms"][0]["type_C"] = "X";
  CHECK_THROWS_AS(boundary_from_json(doc), Error);
  doc = good;
  doc["fibers"][0]["b_count"] = 7;
  CHECK_THROWS_AS(boundary_from_json(doc), Error);
  doc = good;
  doc.erase("fibers");
  CHECK_THROWS_AS(boundary_from_json(doc), Error);
}

TEST_CASE("boundary data needs a planar scenario") {
  RandomOptions line;
  line.dimension = 1;
  const Scenario s = random_scenario(1, line);
  CHECK_THROWS_AS(extract_boundary_data(s, grid(s)), Error);
}
