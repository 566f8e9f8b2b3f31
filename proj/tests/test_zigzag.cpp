#include <catch_amalgamated.hpp>

#include "evasion/zigzag.hpp"
#include "support.hpp"

using namespace evasion;

namespace {

GridSpec grid(const Scenario& s) { return make_grid_cells(s, 128, 256); }

}  // namespace

TEST_CASE("split has one event that splits the uncovered region") {
  const Scenario s = builtin_scenario("split");
  const GridSpec g = grid(s);
  const EventList events = detect_events(s, g);
  REQUIRE(events.size() == 1);
  const Event& e = events.front();
  CHECK(e.t_lo < e.t_hi);
  CHECK(e.t_hi - e.t_lo <= kDefaultTolerance + 1e-15);
  const FiberComplex before = rasterize_fiber(s, e.t_lo, g);
  const FiberComplex after = rasterize_fiber(s, e.t_hi, g);
  CHECK(testing::flood_components(before, true) == 1);
  CHECK(testing::flood_components(after, true) == 2);
  // The locus goes uncovered -> covered, so the uncovered cobordism retracts
  // onto the earlier fiber.
  CHECK(e.type_x == EventType::D);
  CHECK(retract_side(e.type_x) == Side::Left);
  CHECK(to_c_convention(e.type_x) == EventType::N);
}

TEST_CASE("scenarios without moving coverage have no events") {
  for (const char* name : {"empty", "full"}) {
    const Scenario s = builtin_scenario(name);
    CHECK(detect_events(s, grid(s)).empty());
  }
}

TEST_CASE("every signature change lies inside an event window") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Scenario s = random_scenario(seed);
    const GridSpec g = make_grid_cells(s, 64, 64);
    EventList events;
    try {
      events = detect_events(s, g);
    } catch (const Error&) {
      continue;
    }
    // Scan at a uniform step; between windows the signature is constant.
    Signature prev = signature(rasterize_fiber(s, 0.0, g));
    double prev_t = 0.0;
    for (int k = 1; k <= 400; ++k) {
      const double t = k / 400.0;
      const Signature now = signature(rasterize_fiber(s, t, g));
      if (!(now == prev)) {
        const bool explained = std::any_of(events.begin(), events.end(), [&](const Event& e) {
          return e.t_lo < t && e.t_hi > prev_t;
        });
        INFO("seed " << seed << " change in (" << prev_t << ", " << t << "]");
        CHECK(explained);
      }
      prev = now;
      prev_t = t;
    }
  }
}

TEST_CASE("samples interleave events") {
  EventList events{{0.2, 0.21, 0, EventType::N}, {0.5, 0.51, 0, EventType::D}};
  const Samples line = interleave(events, TimeBase::Interval);
  REQUIRE(line.s.size() == 3);
  CHECK(line.s[0] == 0.0);
  CHECK(line.s[1] == Catch::Approx(0.355));
  CHECK(line.s[2] == 1.0);
  CHECK(events_per_cobordism(line, events) == std::vector<int>{0, 1});
  const Samples loop = interleave(events, TimeBase::Circle);
  REQUIRE(loop.s.size() == 2);
  CHECK(loop.cobordism_count() == 2);
  const auto per = events_per_cobordism(loop, events);
  CHECK(std::count(per.begin(), per.end(), -1) == 0);
}

TEST_CASE("direct decomposition fibers match flood-fill component counts") {
  for (const char* name : {"split", "annuli", "close"}) {
    const Scenario s = builtin_scenario(name);
    const GridSpec g = grid(s);
    const CoverageTimeline tl(s, g);
    const EventList events = detect_events(tl);
    const SpacetimeDecomposition d = decompose(s, tl, interleave(events, s.time_base));
    REQUIRE(d.fibers.size() == d.x.diagram.fiber_sizes.size());
    for (std::size_t i = 0; i < d.fibers.size(); ++i) {
      CHECK(d.x.diagram.fiber_sizes[i] == testing::flood_components(rasterize_fiber(s, d.samples.s[i], g), true));
    }
    REQUIRE_NOTHROW(check_retractions(d.x.diagram, events_per_cobordism(d.samples, events), events));
  }
}

TEST_CASE("events serialize with windows and loci") {
  const Scenario s = builtin_scenario("split");
  const GridSpec g = grid(s);
  const auto doc = events_to_json(detect_events(s, g), g);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 1);
  CHECK(doc[0]["type_X"] == "D");
}
