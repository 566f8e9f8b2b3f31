#pragma once

// Critical-event detection, interleaved samples, and the wide zigzag
// diagrams of component sets for the uncovered, boundary and covered regions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evasion/error.hpp"
#include "evasion/parallel.hpp"
#include "evasion/rasterize.hpp"
#include "evasion/scenario.hpp"
#include "evasion/timeline.hpp"
#include "evasion/zigzag_diagram.hpp"

namespace evasion {

enum class EventType { N, D };

inline const char* event_type_name(EventType t) { return t == EventType::N ? "N" : "D"; }

// Types with respect to X -> I and C -> I are opposite.
inline EventType to_c_convention(EventType type_x) { return type_x == EventType::N ? EventType::D : EventType::N; }

struct Event {
  double t_lo = 0.0;
  double t_hi = 0.0;
  int locus = -1;  // cell index
  EventType type_x = EventType::N;
  friend bool operator==(const Event&, const Event&) = default;
};

using EventList = std::vector<Event>;

struct Signature {
  int pi0_x = 0;
  int b1_x = 0;
  int pi0_b = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

inline Signature signature(const FiberComplex& f) {
  return {components(f, Region::Uncovered).count, first_betti_uncovered(f), components(f, Region::Boundary).count};
}

inline constexpr double kDefaultTolerance = 1e-4;

// D iff the locus goes uncovered -> covered through the window.
inline EventType classify_event(const Scenario& s, const GridSpec& g, double t_lo, double t_hi, int locus) {
  const bool before = rasterize_fiber(s, t_lo, g).uncovered(locus);
  const bool after = rasterize_fiber(s, t_hi, g).uncovered(locus);
  if (before == after)
    throw AnalysisError("not a coverage event", "cell " + std::to_string(locus) + " does not change coverage in [" +
                                                    std::to_string(t_lo) + ", " + std::to_string(t_hi) + "]");
  return before ? EventType::D : EventType::N;
}

namespace detail {

inline std::string window_text(double a, double b) {
  return "[" + std::to_string(a) + ", " + std::to_string(b) + "]";
}

// Ring positions E, NE, N, NW, W, SW, S, SE; bit k set when position k is
// uncovered. A cell is simple for (4, 8) topology when its uncovered ring
// neighbours form one 4-run touching it and the rest form one 8-component.
inline bool simple_ring(unsigned ring) {
  auto in = [&](int k) { return ((ring >> (k & 7)) & 1u) != 0; };
  if (ring == 0xFFu) return false;
  int t4 = 0;
  // Start right after an excluded position so runs do not wrap.
  int start = 0;
  while (in(start)) ++start;
  bool in_run = false;
  bool touches = false;
  for (int s = 1; s <= 8; ++s) {
    const int k = (start + s) & 7;
    if (in(k)) {
      touches = touches || k % 2 == 0;
      in_run = true;
    } else if (in_run) {
      t4 += touches ? 1 : 0;
      in_run = false;
      touches = false;
    }
  }
  if (t4 != 1) return false;
  UnionFind uf(8);
  for (int k = 0; k < 8; ++k) {
    if (in(k)) continue;
    if (!in(k + 1)) uf.unite(k, (k + 1) & 7);
    if (k % 2 == 0 && !in(k + 2)) uf.unite(k, (k + 2) & 7);
  }
  int t8 = 0;
  for (int k = 0; k < 8; ++k) t8 += !in(k) && uf.find(k) == static_cast<std::uint32_t>(k);
  return t8 == 1;
}

inline const std::array<bool, 256>& simple_table() {
  static const std::array<bool, 256> table = [] {
    std::array<bool, 256> t{};
    for (unsigned r = 0; r < 256; ++r) t[r] = simple_ring(r);
    return t;
  }();
  return table;
}

inline bool is_simple(const FiberComplex& f, int cell) {
  static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static constexpr int dy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  const auto& g = f.grid;
  unsigned ring = 0;
  for (int k = 0; k < 8; ++k) {
    const int i = g.column(cell) + dx[k];
    const int j = g.row(cell) + dy[k];
    if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) continue;
    if (f.uncovered(g.index(i, j))) ring |= 1u << k;
  }
  return simple_table()[ring];
}

// Flips closer than this are treated as one instant.
inline constexpr double kSameInstant = 1e-12;

}  // namespace detail

// Walks the exact coverage history. A flip that is not a simple point for
// the uncovered raster can change (|pi0 X|, b1 X, |pi0 B|); each change is
// an event whose window is the flip time widened by tol/2 on each side,
// clipped halfway to the neighbouring flips.
inline EventList detect_events(const CoverageTimeline& tl, double tol = kDefaultTolerance) {
  if (!(tol > 0.0)) throw Error("invalid tolerance", "tol must be positive");
  const bool circle = tl.base() == TimeBase::Circle;
  const auto flips = tl.flips();
  FiberComplex f = fiber_at(tl, kTimeStart);
  Signature sig = signature(f);
  EventList events;
  const std::size_t n = flips.size();
  auto flip_time = [&](long long k) {
    if (k < 0) return circle ? flips[n - 1].t - 1.0 : kTimeStart;
    if (k >= static_cast<long long>(n)) return circle ? flips[0].t + 1.0 : kTimeEnd;
    return flips[k].t;
  };
  for (std::size_t k = 0; k < n;) {
    std::size_t e = k + 1;
    while (e < n && flips[e].t - flips[k].t <= detail::kSameInstant) ++e;
    int non_simple = 0;
    int locus = -1;
    bool opens = flips[k].opens;
    bool mixed = false;
    for (std::size_t m = k; m < e; ++m) {
      const int c = flips[m].cell;
      mixed = mixed || flips[m].opens != opens;
      if (!detail::is_simple(f, c)) {
        ++non_simple;
        locus = c;
        opens = flips[m].opens;
      }
      f.cells[c] = flips[m].opens ? CellState::Uncovered : CellState::Covered;
    }
    const double t = flips[k].t;
    const double lo = std::max(t - 0.5 * tol, 0.5 * (t + flip_time(static_cast<long long>(k) - 1)));
    const double hi = std::min(flips[e - 1].t + 0.5 * tol, 0.5 * (flips[e - 1].t + flip_time(static_cast<long long>(e))));
    if (non_simple > 0) {
      const Signature next = signature(f);
      if (!(next == sig)) {
        if (non_simple > 1 || mixed)
          throw AnalysisError("simultaneous events", "coverage changes at several cells at t = " + std::to_string(t));
        // On a line every gap has two endpoints, so B moves in steps of two.
        const int b_step = tl.grid().ny == 1 ? 2 : 1;
        const auto jump = [](int a, int b, int step) { return std::abs(a - b) > step; };
        if (jump(sig.pi0_x, next.pi0_x, 1) || jump(sig.b1_x, next.b1_x, 1) || jump(sig.pi0_b, next.pi0_b, b_step))
          throw AnalysisError("resolution too coarse", "signature jumps by more than one inside " + detail::window_text(lo, hi));
        Event ev;
        ev.t_lo = lo;
        ev.t_hi = hi;
        ev.locus = locus;
        ev.type_x = opens ? EventType::N : EventType::D;
        events.push_back(ev);
        sig = next;
      }
    }
    k = e;
  }
  return events;
}

inline EventList detect_events(const Scenario& s, const GridSpec& g, double tol = kDefaultTolerance) {
  return detect_events(CoverageTimeline(s, g), tol);
}

// Regular values s_0 < ... between the event windows. On a circle s holds
// n points and cobordism k runs from s_k to s_{k+1} (s_0 + 1 for the last).
struct Samples {
  TimeBase base = TimeBase::Interval;
  std::vector<double> s;

  std::size_t cobordism_count() const { return base == TimeBase::Circle ? s.size() : s.size() - 1; }
  std::pair<double, double> cobordism(std::size_t k) const {
    if (base == TimeBase::Circle && k + 1 == s.size()) return {s[k], s.front() + 1.0};
    return {s[k], s[k + 1]};
  }
  friend bool operator==(const Samples&, const Samples&) = default;
};

inline Samples interleave(const EventList& events, TimeBase base) {
  Samples out;
  out.base = base;
  const std::size_t n = events.size();
  if (base == TimeBase::Interval) {
    out.s.push_back(kTimeStart);
    for (std::size_t k = 0; k + 1 < n; ++k) out.s.push_back(0.5 * (events[k].t_hi + events[k + 1].t_lo));
    out.s.push_back(kTimeEnd);
    return out;
  }
  if (n == 0) {
    out.s.push_back(kTimeStart);
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double next = k + 1 < n ? events[k + 1].t_lo : events.front().t_lo + 1.0;
    out.s.push_back(wrap_time(0.5 * (events[k].t_hi + next)));
  }
  std::sort(out.s.begin(), out.s.end());
  return out;
}

// Index of the event inside each cobordism, or -1.
inline std::vector<int> events_per_cobordism(const Samples& samples, const EventList& events) {
  std::vector<int> out(samples.cobordism_count(), -1);
  for (std::size_t e = 0; e < events.size(); ++e) {
    const double mid = 0.5 * (events[e].t_lo + events[e].t_hi);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto [a, b] = samples.cobordism(k);
      if ((mid >= a && mid <= b) || (mid + 1.0 >= a && mid + 1.0 <= b)) {
        out[k] = static_cast<int>(e);
        break;
      }
    }
  }
  return out;
}

struct RegionZigzag {
  ZigzagSetDiagram diagram;
  std::vector<Labeling> fiber_labels;
};

// Everything the pipelines need from one pass over the sampled spacetime.
// Cobordism rasters are not retained.
struct SpacetimeDecomposition {
  Samples samples;
  std::vector<FiberComplex> fibers;
  RegionZigzag x;
  RegionZigzag b;
  RegionZigzag c;
  std::vector<std::vector<int>> fiber_iota;      // B label -> X label, per fiber
  std::vector<std::vector<int>> cobordism_iota;  // B label -> X label, per cobordism
};

// Moves every interior sample to the middle of the flip-free gap holding it,
// so the fibers sit as far from coverage changes as possible. The interval
// endpoints stay put.
inline Samples settle(const Samples& samples, const CoverageTimeline& tl) {
  std::vector<double> times;
  for (const auto& f : tl.flips()) times.push_back(f.t);
  Samples out = samples;
  if (times.empty()) return out;
  const bool circle = samples.base == TimeBase::Circle;
  for (std::size_t i = 0; i < out.s.size(); ++i) {
    if (!circle && (i == 0 || i + 1 == out.s.size())) continue;
    const double t = out.s[i];
    const auto hi = std::upper_bound(times.begin(), times.end(), t);
    double a = hi == times.begin() ? (circle ? times.back() - 1.0 : kTimeStart) : *(hi - 1);
    double b = hi == times.end() ? (circle ? times.front() + 1.0 : kTimeEnd) : *hi;
    out.s[i] = circle ? wrap_time(0.5 * (a + b)) : 0.5 * (a + b);
  }
  if (circle) std::sort(out.s.begin(), out.s.end());
  return out;
}

namespace detail {

// Cobordism component of every fiber component, through the piece of each
// fiber node alive at time t.
inline std::vector<int> induced_map(const Labeling& fiber, const SpacetimeComplex& st, double t) {
  std::vector<int> out(fiber.count, -1);
  for (std::size_t v = 0; v < fiber.label.size(); ++v) {
    const int a = fiber.label[v];
    if (a < 0) continue;
    const int piece = st.piece_at(static_cast<int>(v), t);
    if (piece < 0)
      throw AnalysisError("resolution too coarse", "raster at t = " + std::to_string(t) + " disagrees with the coverage history");
    const int target = st.labels.label[piece];
    if (out[a] >= 0 && out[a] != target)
      throw Error("invalid diagram", "a fiber component lies in two cobordism components");
    out[a] = target;
  }
  for (int v : out)
    if (v < 0) throw Error("invalid diagram", "a fiber component embeds in no cobordism component");
  return out;
}

inline std::vector<int> iota(const Labeling& b, const Labeling& x) {
  std::vector<int> out(b.count, -1);
  for (std::size_t v = 0; v < b.label.size(); ++v)
    if (b.label[v] >= 0 && out[b.label[v]] < 0) out[b.label[v]] = x.label[node_cell(static_cast<int>(v), Region::Boundary)];
  return out;
}

inline std::vector<int> iota(const SpacetimeComplex& b, const SpacetimeComplex& x) {
  std::vector<int> out(b.labels.count, -1);
  for (std::size_t k = 0; k < b.id.size(); ++k) {
    const int lab = b.labels.label[k];
    if (out[lab] >= 0) continue;
    const int piece = x.piece_at(node_cell(b.id[k], Region::Boundary), 0.5 * (b.span[k].lo + b.span[k].hi));
    if (piece < 0) throw Error("invalid complex", "boundary piece outside the uncovered region");
    out[lab] = x.labels.label[piece];
  }
  return out;
}

inline void check_fiber(const FiberComplex& exact, const Scenario& s) {
  const FiberComplex direct = rasterize_fiber(s, exact.time, exact.grid);
  if (direct.cells != exact.cells)
    throw AnalysisError("resolution too coarse", "raster at t = " + std::to_string(exact.time) + " disagrees with the coverage history");
}

}  // namespace detail

// Fibers, component labels and cobordism maps for every region. Sample times
// are settled into flip-free gaps first; d.samples holds the times used.
inline SpacetimeDecomposition decompose(const Scenario& s, const CoverageTimeline& tl, const Samples& requested) {
  SpacetimeDecomposition d;
  d.samples = settle(requested, tl);
  const auto& samples = d.samples;
  const std::size_t nf = samples.s.size();
  d.fibers.resize(nf);
  parallel_for(nf, [&](std::size_t i) {
    d.fibers[i] = fiber_at(tl, samples.s[i]);
    detail::check_fiber(d.fibers[i], s);
  });
  const Shape shape = samples.base == TimeBase::Circle ? Shape::Circle : Shape::Interval;
  const std::array<std::pair<Region, RegionZigzag*>, 3> regions{
      {{Region::Uncovered, &d.x}, {Region::Boundary, &d.b}, {Region::Covered, &d.c}}};
  for (auto [region, rz] : regions) {
    rz->diagram.shape = shape;
    for (const auto& f : d.fibers) {
      rz->fiber_labels.push_back(components(f, region));
      rz->diagram.fiber_sizes.push_back(rz->fiber_labels.back().count);
    }
  }
  for (std::size_t i = 0; i < nf; ++i) d.fiber_iota.push_back(detail::iota(d.b.fiber_labels[i], d.x.fiber_labels[i]));
  const std::size_t ncob = samples.cobordism_count();
  for (auto [region, rz] : regions) rz->diagram.cobordisms.resize(ncob);
  d.cobordism_iota.resize(ncob);
  parallel_for(ncob, [&](std::size_t k) {
    const auto [a, bt] = samples.cobordism(k);
    const std::size_t rk = shape == Shape::Circle ? (k + 1) % nf : k + 1;
    SpacetimeComplex xs;
    SpacetimeComplex bs;
    for (auto [region, rz] : regions) {
      SpacetimeComplex st = spacetime_components(tl, a, bt, region);
      CobordismMaps maps;
      maps.size = st.labels.count;
      maps.left = detail::induced_map(rz->fiber_labels[k], st, a);
      maps.right = detail::induced_map(rz->fiber_labels[rk], st, bt);
      rz->diagram.cobordisms[k] = std::move(maps);
      if (region == Region::Uncovered) xs = std::move(st);
      if (region == Region::Boundary) bs = std::move(st);
    }
    d.cobordism_iota[k] = detail::iota(bs, xs);
  });
  for (auto [region, rz] : regions) rz->diagram.validate();
  return d;
}

inline SpacetimeDecomposition decompose(const Scenario& s, const GridSpec& g, const Samples& samples) {
  return decompose(s, CoverageTimeline(s, g), samples);
}

inline ZigzagSetDiagram build_zigzag(const Scenario& s, const Samples& samples, const GridSpec& g, Region region) {
  auto d = decompose(s, g, samples);
  switch (region) {
    case Region::Uncovered: return d.x.diagram;
    case Region::Boundary: return d.b.diagram;
    case Region::Covered: return d.c.diagram;
  }
  return {};
}

inline bool is_bijection(const std::vector<int>& map, int target_size) {
  if (static_cast<int>(map.size()) != target_size) return false;
  std::vector<std::uint8_t> hit(target_size, 0);
  for (int v : map) {
    if (v < 0 || v >= target_size || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

// Side the cobordism retracts onto: the earlier fiber for an X-type D event,
// the later one for type N. Event-free cobordisms retract onto both.
enum class Side { Left, Right };

inline Side retract_side(EventType type_x) { return type_x == EventType::D ? Side::Left : Side::Right; }

// Throws "resolution too coarse" when the retraction side map of some
// cobordism of the X diagram is not a bijection.
inline void check_retractions(const ZigzagSetDiagram& zx, const std::vector<int>& cob_event, const EventList& events) {
  for (std::size_t k = 0; k < zx.cobordisms.size(); ++k) {
    const auto& m = zx.cobordisms[k];
    const bool left_ok = is_bijection(m.left, m.size);
    const bool right_ok = is_bijection(m.right, m.size);
    bool ok = left_ok && right_ok;
    if (cob_event[k] >= 0) ok = retract_side(events[cob_event[k]].type_x) == Side::Left ? left_ok : right_ok;
    if (!ok)
      throw AnalysisError("resolution too coarse",
                          "cobordism " + std::to_string(k) + " does not retract onto its " +
                              (cob_event[k] >= 0 ? "event side" : "ends"));
  }
}

inline nlohmann::json events_to_json(const EventList& events, const GridSpec& g) {
  auto out = nlohmann::json::array();
  for (const auto& e : events)
    out.push_back({{"window", {e.t_lo, e.t_hi}},
                   {"locus", {g.column(e.locus), g.row(e.locus)}},
                   {"type_X", event_type_name(e.type_x)}});
  return out;
}

}  // namespace evasion
