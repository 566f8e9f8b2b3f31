#include <catch_amalgamated.hpp>

#include "evasion/scenario.hpp"

using namespace evasion;

TEST_CASE("builtin and random scenarios round-trip through JSON") {
  for (const auto& name : builtin_names()) {
    const Scenario s = builtin_scenario(name, 5);
    CHECK(load_scenario(save_scenario(s)) == s);
  }
  RandomOptions line;
  line.dimension = 1;
  RandomOptions loop;
  loop.time_base = TimeBase::Circle;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& opt : {RandomOptions{}, line, loop}) {
      const Scenario s = random_scenario(seed, opt);
      REQUIRE_NOTHROW(validate(s));
      CHECK(load_scenario(save_scenario(s)) == s);
    }
  }
}

TEST_CASE("random scenarios depend only on the seed") {
  CHECK(random_scenario(42) == random_scenario(42));
  CHECK_FALSE(random_scenario(42) == random_scenario(43));
  CHECK(builtin_scenario("split", 1) == builtin_scenario("split", 2));
  CHECK_THROWS_AS(builtin_scenario("nonsense"), ScenarioError);
}

TEST_CASE("sensor positions interpolate linearly and wrap on a circle") {
  SensorTrack track{{{0.0, {0.0, 0.0}}, {0.5, {1.0, 0.0}}, {1.0, {0.0, 0.0}}}};
  CHECK(sensor_position(track, 0.25, TimeBase::Interval).x == Catch::Approx(0.5));
  CHECK(sensor_position(track, 0.75, TimeBase::Interval).x == Catch::Approx(0.5));
  CHECK(sensor_position(track, 1.25, TimeBase::Circle).x == Catch::Approx(0.5));
  CHECK_THROWS_AS(sensor_position(track, 1.25, TimeBase::Interval), ScenarioError);
  CHECK(wrap_time(1.0) == 0.0);
  CHECK(wrap_time(-0.25) == Catch::Approx(0.75));
}

TEST_CASE("invalid documents are rejected with a reason") {
  auto kind_of = [](const std::string& text) {
    try {
      load_scenario(text);
    } catch (const ScenarioError& e) {
      return e.kind();
    }
    return std::string("accepted");
  };
  CHECK(kind_of("not json") == "malformed scenario");
  CHECK(kind_of("[]") == "malformed scenario");
  const std::string good = save_scenario(builtin_scenario("split"));
  CHECK(kind_of(good) == "accepted");
  auto doc = Json::parse(good);
  doc["dimension"] = 3;
  CHECK(kind_of(doc.dump()) == "invalid scenario");
  doc = Json::parse(good);
  doc["tracks"][0][0][0] = 0.1;
  CHECK(kind_of(doc.dump()) == "invalid scenario");
  doc = Json::parse(good);
  doc["tracks"][0][1][1] = Json::array({5.0, 5.0});
  CHECK(kind_of(doc.dump()) == "invalid scenario");
  doc = Json::parse(good);
  doc["time_base"] = "circle";
  CHECK(kind_of(doc.dump()) == "invalid scenario");  // tracks do not close
  doc = Json::parse(good);
  doc["fence_width"] = 2.0;
  CHECK(kind_of(doc.dump()) == "invalid scenario");
}
