#pragma once

// Scenario data model: sensor tracks moving in a fenced disk over an
// interval or circular time base. Includes the canonical JSON document
// format and the built-in generators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evasion/error.hpp"

namespace evasion {

using Json = nlohmann::json;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

enum class TimeBase { Interval, Circle };

struct Waypoint {
  double t = 0.0;
  Point position;
  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct SensorTrack {
  std::vector<Waypoint> waypoints;
  friend bool operator==(const SensorTrack&, const SensorTrack&) = default;
};

// The disk D. In dimension 1 it degenerates to [center.x - radius, center.x + radius].
struct Domain {
  Point center;
  double radius = 1.0;
  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Scenario {
  int dimension = 2;
  Domain domain;
  double sensing_radius = 0.1;
  // Points within fence_width of the domain wall are covered at all times.
  double fence_width = 0.1;
  TimeBase time_base = TimeBase::Interval;
  std::vector<SensorTrack> tracks;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Time base is [0, 1]; a circular base identifies 1 with 0.
inline constexpr double kTimeStart = 0.0;
inline constexpr double kTimeEnd = 1.0;

inline double wrap_time(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

inline bool inside_domain(const Scenario& s, Point p) {
  const double r = s.domain.radius;
  if (s.dimension == 1) return std::abs(p.x - s.domain.center.x) <= r;
  return squared_distance(p, s.domain.center) <= r * r;
}

// Throws ScenarioError naming the offending field.
inline void validate(const Scenario& s) {
  auto fail = [](const std::string& path, const std::string& what) {
    throw ScenarioError("invalid scenario", path + ": " + what);
  };
  if (s.dimension != 1 && s.dimension != 2) fail("dimension", "must be 1 or 2");
  if (!(s.domain.radius > 0.0) || !std::isfinite(s.domain.radius)) fail("domain.radius", "must be positive");
  if (!(s.sensing_radius > 0.0) || !std::isfinite(s.sensing_radius)) fail("sensing_radius", "must be positive");
  if (!(s.fence_width > 0.0)) fail("fence_width", "must be positive");
  if (!(s.fence_width < s.domain.radius)) fail("fence_width", "must be smaller than the domain radius");
  if (s.dimension == 1 && s.domain.center.y != 0.0) fail("domain.center", "must have one coordinate in dimension 1");
  for (std::size_t k = 0; k < s.tracks.size(); ++k) {
    const auto& w = s.tracks[k].waypoints;
    const std::string base = "tracks[" + std::to_string(k) + "]";
    if (w.size() < 2) fail(base, "needs at least two waypoints");
    if (w.front().t != kTimeStart) fail(base + "[0]", "first waypoint time must be 0");
    if (w.back().t != kTimeEnd) fail(base + "[" + std::to_string(w.size() - 1) + "]", "last waypoint time must be 1");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string path = base + "[" + std::to_string(i) + "]";
      if (i > 0 && !(w[i].t > w[i - 1].t)) fail(path, "waypoint times must be strictly increasing");
      if (!std::isfinite(w[i].position.x) || !std::isfinite(w[i].position.y)) fail(path, "non-finite position");
      if (s.dimension == 1 && w[i].position.y != 0.0) fail(path, "position must have one coordinate in dimension 1");
      if (!inside_domain(s, w[i].position)) fail(path, "position outside domain");
    }
    if (s.time_base == TimeBase::Circle && !(w.front().position == w.back().position))
      fail(base, "circular time base requires equal first and last positions");
  }
}

// Piecewise-linear interpolation of the track. A circular base wraps t into
// [0, 1); an interval base rejects t outside [0, 1].
inline Point sensor_position(const SensorTrack& track, double t, TimeBase base) {
  if (base == TimeBase::Circle) {
    t = wrap_time(t);
  } else if (t < kTimeStart || t > kTimeEnd || std::isnan(t)) {
    throw ScenarioError("time outside base", "t = " + std::to_string(t) + " is not in [0, 1]");
  }
  const auto& w = track.waypoints;
  auto hi = std::upper_bound(w.begin(), w.end(), t, [](double v, const Waypoint& p) { return v < p.t; });
  if (hi == w.begin()) return w.front().position;
  if (hi == w.end()) return w.back().position;
  const auto& a = *(hi - 1);
  const auto& b = *hi;
  if (t == a.t) return a.position;
  const double u = (t - a.t) / (b.t - a.t);
  return {a.position.x + u * (b.position.x - a.position.x), a.position.y + u * (b.position.y - a.position.y)};
}

// ---------------------------------------------------------------------------
// JSON document

namespace detail {

inline Json point_to_json(Point p, int dimension) {
  return dimension == 1 ? Json::array({p.x}) : Json::array({p.x, p.y});
}

inline const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    throw ScenarioError("malformed scenario", path + (path.empty() ? "" : ".") + key + ": missing");
  return obj.at(key);
}

inline double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioError("malformed scenario", path + ": expected a number");
  return v.get<double>();
}

inline Point point_from_json(const Json& v, int dimension, const std::string& path) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(dimension))
    throw ScenarioError("malformed scenario", path + ": expected " + std::to_string(dimension) + " coordinates");
  Point p;
  p.x = number(v[0], path + "[0]");
  if (dimension == 2) p.y = number(v[1], path + "[1]");
  return p;
}

}  // namespace detail

inline Json scenario_to_json(const Scenario& s) {
  Json tracks = Json::array();
  for (const auto& track : s.tracks) {
    Json arr = Json::array();
    for (const auto& w : track.waypoints) arr.push_back(Json::array({w.t, detail::point_to_json(w.position, s.dimension)}));
    tracks.push_back(std::move(arr));
  }
  Json doc;
  doc["dimension"] = s.dimension;
  doc["domain"] = {{"center", detail::point_to_json(s.domain.center, s.dimension)}, {"radius", s.domain.radius}};
  doc["sensing_radius"] = s.sensing_radius;
  doc["fence_width"] = s.fence_width;
  doc["time_base"] = s.time_base == TimeBase::Interval ? "interval" : "circle";
  doc["tracks"] = std::move(tracks);
  return doc;
}

inline Scenario scenario_from_json(const Json& doc) {
  using detail::number;
  using detail::require;
  if (!doc.is_object()) throw ScenarioError("malformed scenario", "document must be a JSON object");
  Scenario s;
  const Json& dim = require(doc, "dimension", "");
  if (!dim.is_number_integer()) throw ScenarioError("malformed scenario", "dimension: expected an integer");
  s.dimension = dim.get<int>();
  if (s.dimension != 1 && s.dimension != 2) throw ScenarioError("invalid scenario", "dimension: must be 1 or 2");
  const Json& domain = require(doc, "domain", "");
  s.domain.center = detail::point_from_json(require(domain, "center", "domain"), s.dimension, "domain.center");
  s.domain.radius = number(require(domain, "radius", "domain"), "domain.radius");
  s.sensing_radius = number(require(doc, "sensing_radius", ""), "sensing_radius");
  s.fence_width = number(require(doc, "fence_width", ""), "fence_width");
  const Json& base = require(doc, "time_base", "");
  if (base == "interval") {
    s.time_base = TimeBase::Interval;
  } else if (base == "circle") {
    s.time_base = TimeBase::Circle;
  } else {
    throw ScenarioError("malformed scenario", "time_base: expected \"interval\" or \"circle\"");
  }
  const Json& tracks = require(doc, "tracks", "");
  if (!tracks.is_array()) throw ScenarioError("malformed scenario", "tracks: expected an array");
  for (std::size_t k = 0; k < tracks.size(); ++k) {
    const std::string tpath = "tracks[" + std::to_string(k) + "]";
    if (!tracks[k].is_array()) throw ScenarioError("malformed scenario", tpath + ": expected an array");
    SensorTrack track;
    for (std::size_t i = 0; i < tracks[k].size(); ++i) {
      const std::string wpath = tpath + "[" + std::to_string(i) + "]";
      const Json& w = tracks[k][i];
      if (!w.is_array() || w.size() != 2) throw ScenarioError("malformed scenario", wpath + ": expected [t, position]");
      track.waypoints.push_back({number(w[0], wpath + "[0]"), detail::point_from_json(w[1], s.dimension, wpath + "[1]")});
    }
    s.tracks.push_back(std::move(track));
  }
  validate(s);
  return s;
}

// Canonical text: sorted keys, shortest round-trip decimals, trailing newline.
inline std::string save_scenario(const Scenario& s) { return scenario_to_json(s).dump() + "\n"; }

inline Scenario load_scenario(std::string_view text) {
  Json doc = Json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) throw ScenarioError("malformed scenario", "document is not valid JSON");
  return scenario_from_json(doc);
}

// ---------------------------------------------------------------------------
// Built-in generators

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations so documents are portable.
class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() * (hi - lo + 1)); }
  Point in_disk(Point c, double radius) {
    for (;;) {
      double x = uniform(-1.0, 1.0);
      double y = uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return {c.x + radius * x, c.y + radius * y};
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline SensorTrack static_track(Point p) { return {{{0.0, p}, {1.0, p}}}; }

inline std::vector<SensorTrack> wall_tracks() {
  // Two chains hanging from the fence at top and bottom; the tip of each
  // chain slides toward the other and they meet once near t = 0.63.
  std::vector<SensorTrack> t;
  for (double y : {0.85, 0.62, 0.39}) t.push_back(static_track({0.01, y}));
  for (double y : {-0.85, -0.62, -0.39}) t.push_back(static_track({-0.01, y}));
  t.push_back({{{0.0, {0.01, 0.30}}, {0.3, {0.01, 0.30}}, {0.7, {0.01, 0.12}}, {1.0, {0.01, 0.12}}}});
  t.push_back({{{0.0, {-0.01, -0.30}}, {0.25, {-0.01, -0.30}}, {0.75, {-0.01, -0.10}}, {1.0, {-0.01, -0.10}}}});
  return t;
}

}  // namespace detail

struct RandomOptions {
  int dimension = 2;
  TimeBase time_base = TimeBase::Interval;
};

// Seeded random tracks in the unit disk. Dimension 2 uses 3-6 sensors with
// one interior waypoint; dimension 1 uses 2-5 sensors in straight-line motion.
inline Scenario random_scenario(std::uint64_t seed, RandomOptions opt = {}) {
  detail::UnitRng rng(seed);
  Scenario s;
  s.dimension = opt.dimension;
  s.domain = {{0.0, 0.0}, 1.0};
  s.fence_width = 0.1;
  s.time_base = opt.time_base;
  if (opt.dimension == 1) {
    s.sensing_radius = rng.uniform(0.05, 0.12);
    const int n = rng.integer(2, 5);
    for (int k = 0; k < n; ++k) {
      Point a{rng.uniform(-0.9, 0.9), 0.0};
      Point b{rng.uniform(-0.9, 0.9), 0.0};
      if (opt.time_base == TimeBase::Circle) {
        double tm = rng.uniform(0.3, 0.7);
        s.tracks.push_back({{{0.0, a}, {tm, b}, {1.0, a}}});
      } else {
        s.tracks.push_back({{{0.0, a}, {1.0, b}}});
      }
    }
  } else {
    s.sensing_radius = rng.uniform(0.15, 0.25);
    const int n = rng.integer(3, 6);
    for (int k = 0; k < n; ++k) {
      SensorTrack track;
      Point p0 = rng.in_disk({0.0, 0.0}, 0.85);
      if (opt.time_base == TimeBase::Circle) {
        double t1 = rng.uniform(0.2, 0.45);
        double t2 = rng.uniform(0.55, 0.8);
        Point p1 = rng.in_disk({0.0, 0.0}, 0.85);
        Point p2 = rng.in_disk({0.0, 0.0}, 0.85);
        track.waypoints = {{0.0, p0}, {t1, p1}, {t2, p2}, {1.0, p0}};
      } else {
        double tm = rng.uniform(0.3, 0.7);
        Point p1 = rng.in_disk({0.0, 0.0}, 0.85);
        Point p2 = rng.in_disk({0.0, 0.0}, 0.85);
        track.waypoints = {{0.0, p0}, {tm, p1}, {1.0, p2}};
      }
      s.tracks.push_back(std::move(track));
    }
  }
  validate(s);
  return s;
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"split", "close", "annuli", "empty", "full", "random"};
  return names;
}

// Deterministic scenario for (name, seed); only "random" consults the seed.
//   split  - one uncovered region is cut in two by a closing wall
//   close  - the single uncovered pocket is covered over a middle subinterval
//   annuli - a region around two covered islands splits into two annuli
//   empty  - no sensors
//   full   - one sensor covers the whole domain
inline Scenario builtin_scenario(std::string_view name, std::uint64_t seed = 0) {
  Scenario s;
  s.dimension = 2;
  s.domain = {{0.0, 0.0}, 1.0};
  s.fence_width = 0.1;
  s.sensing_radius = 0.15;
  if (name == "split") {
    s.tracks = detail::wall_tracks();
  } else if (name == "annuli") {
    s.tracks = detail::wall_tracks();
    s.tracks.push_back(detail::static_track({-0.55, 0.02}));
    s.tracks.push_back(detail::static_track({0.56, -0.01}));
  } else if (name == "close") {
    // Four static sensors on the axes leave one pocket at the center; a
    // fifth sweeps in on a diagonal, swallows the pocket, and withdraws.
    s.domain = {{0.0, 0.0}, 0.6};
    s.fence_width = 0.2;
    s.sensing_radius = 0.35;
    auto polar = [](double rho, double deg) {
      double a = deg * std::numbers::pi / 180.0;
      return Point{rho * std::cos(a), rho * std::sin(a)};
    };
    for (double deg : {0.0, 90.0, 180.0, 270.0}) s.tracks.push_back(detail::static_track(polar(0.4, deg)));
    const double heading = 40.0;
    s.tracks.push_back({{{0.0, polar(0.55, heading)},
                         {0.3, polar(0.55, heading)},
                         {0.45, polar(0.0, heading)},
                         {0.6, polar(0.0, heading)},
                         {0.8, polar(0.55, heading)},
                         {1.0, polar(0.55, heading)}}});
  } else if (name == "empty") {
    s.sensing_radius = 0.1;
  } else if (name == "full") {
    s.sensing_radius = 1.0;
    s.tracks.push_back(detail::static_track({0.0, 0.0}));
  } else if (name == "random") {
    return random_scenario(seed);
  } else {
    throw ScenarioError("unknown scenario", std::string(name));
  }
  validate(s);
  return s;
}

}  // namespace evasion
