#include <catch_amalgamated.hpp>

#include "evasion/analysis.hpp"

using namespace evasion;

namespace {

GridSpec grid(const Scenario& s, int cells = 128) { return make_grid_cells(s, cells, 256); }

}  // namespace

TEST_CASE("trivial scenarios") {
  const Scenario empty = builtin_scenario("empty");
  const AnalysisReport r = analyze_direct(empty, grid(empty));
  CHECK(r.exists);
  CHECK(r.limit_cardinality.value == 1);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].samples.front().t == 0.0);
  CHECK(r.witnesses[0].samples.back().t == 1.0);

  const Scenario full = builtin_scenario("full");
  const AnalysisReport none = analyze_direct(full, grid(full));
  CHECK_FALSE(none.exists);
  CHECK(none.witnesses.empty());
  CHECK_FALSE(oracle_reachability(full, grid(full)).exists);
}

TEST_CASE("every witness passes the independent point check") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Scenario s = random_scenario(seed);
    const GridSpec g = grid(s, 96);
    AnalysisConfig cfg;
    cfg.witness_cap = 8;
    const AnalysisReport r = analyze_direct(s, g, cfg);
    for (const auto& w : r.witnesses) CHECK_NOTHROW(verify_witness(s, g, w));
  }
}

TEST_CASE("circle witnesses close after one period") {
  RandomOptions loop;
  loop.time_base = TimeBase::Circle;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Scenario s = random_scenario(seed, loop);
    const GridSpec g = grid(s, 96);
    const AnalysisReport r = analyze_direct(s, g);
    CHECK(r.exists == oracle_reachability(s, g).exists);
    for (const auto& w : r.witnesses) {
      CHECK(w.samples.front().cell == w.samples.back().cell);
      CHECK(w.samples.back().t - w.samples.front().t == Catch::Approx(1.0));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("tampered witnesses are rejected") {
  const Scenario s = builtin_scenario("split");
  const GridSpec g = grid(s);
  const AnalysisReport r = analyze_direct(s, g);
  REQUIRE_FALSE(r.witnesses.empty());
  WitnessPath w = r.witnesses.front();
  WitnessPath jump = w;
  jump.samples[1].cell = (jump.samples[1].cell + 7 * g.nx) % g.cell_count();
  CHECK_THROWS_AS(verify_witness(s, g, jump), AnalysisError);
  WitnessPath short_path = w;
  short_path.samples.back().t = 0.9;
  CHECK_THROWS_AS(verify_witness(s, g, short_path), AnalysisError);
  WitnessPath covered = w;
  covered.samples[0].cell = 0;  // outside the domain
  CHECK_THROWS_AS(verify_witness(s, g, covered), AnalysisError);
}

TEST_CASE("single witnesses for chosen elements") {
  const Scenario s = builtin_scenario("split");
  const GridSpec g = grid(s);
  const AnalysisReport r = analyze_direct(s, g);
  REQUIRE(r.limit_elements.size() == 2);
  CHECK(extract_witness(s, g, r.limit_elements[1]) == r.witnesses[1]);
  CHECK_THROWS_AS(extract_witness(s, g, {0}), Error);
  CHECK_THROWS_AS(extract_witness(s, g, {0, 5}), Error);
}

TEST_CASE("caps truncate elements and witnesses") {
  const Scenario s = builtin_scenario("split");
  AnalysisConfig cfg;
  cfg.element_cap = 1;
  cfg.witness_cap = 0;
  const AnalysisReport r = analyze_direct(s, grid(s), cfg);
  CHECK(r.limit_cardinality.value == 2);
  CHECK(r.limit_elements.size() == 1);
  CHECK(r.truncated_elements);
  CHECK(r.truncated_witnesses);
  CHECK(r.witnesses.empty());
}

TEST_CASE("report JSON layout") {
  const Scenario s = builtin_scenario("annuli");
  const GridSpec g = grid(s);
  const auto doc = report_to_json(analyze_direct(s, g), g, 2);
  for (const char* key : {"mode", "exists", "limit_cardinality", "limit_elements", "witnesses", "diagnostics", "truncated"})
    CHECK(doc.contains(key));
  CHECK(doc["mode"] == "direct");
  CHECK(doc["diagnostics"]["banner"] == kLowerBoundBanner);
  CHECK(doc["witnesses"][0]["samples"][0].size() == 2);
  const auto oracle = report_to_json(oracle_reachability(s, g), g, 2);
  CHECK(oracle["mode"] == "oracle");
  CHECK(oracle["diagnostics"].contains("reachable"));
}

TEST_CASE("closed-form count on a hand-made line") {
  // Two static sensors split the open segment into three gaps at every time.
  Scenario s;
  s.dimension = 1;
  s.domain = {{0.0, 0.0}, 1.0};
  s.fence_width = 0.1;
  s.sensing_radius = 0.1;
  for (double x : {-0.3, 0.3}) s.tracks.push_back({{{0.0, {x, 0.0}}, {1.0, {x, 0.0}}}});
  const GridSpec g = grid(s);
  const LineCount lc = d1_count(s, g);
  CHECK(lc.covered_components == 4);
  CHECK(lc.type_n_c == 0);
  CHECK(lc.value == 3);
  CHECK(oracle_reachability(s, g).limit_cardinality.value == 3);
  CHECK(analyze_direct(s, g).limit_cardinality.value == 3);
  AnalysisConfig no_collar;
  no_collar.count_collar_ends = false;
  CHECK(d1_count(s, g, no_collar).covered_components == 2);
  CHECK_THROWS_AS(d1_count(builtin_scenario("empty"), grid(builtin_scenario("empty"))), Error);
}
