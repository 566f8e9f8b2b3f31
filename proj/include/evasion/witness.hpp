#pragma once

// Monotone-in-time grid paths realizing inverse-limit elements. Within each
// cobordism the uncovered spacetime is a graph of (cell, time interval)
// pieces; an earliest-arrival search finds a path that only moves forward in
// time, and concrete move times are then spread inside the feasible windows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "evasion/error.hpp"
#include "evasion/parallel.hpp"
#include "evasion/rasterize.hpp"
#include "evasion/scenario.hpp"
#include "evasion/timeline.hpp"
#include "evasion/zigzag.hpp"

namespace evasion {

struct WitnessSample {
  double t = 0.0;  // unwrapped; a circle path runs from s_0 to s_0 + 1
  int cell = -1;
  friend bool operator==(const WitnessSample&, const WitnessSample&) = default;
};

// The intruder sits in samples[k].cell from samples[k].t until it steps to
// samples[k + 1].cell at samples[k + 1].t.
struct WitnessPath {
  std::vector<WitnessSample> samples;
  friend bool operator==(const WitnessPath&, const WitnessPath&) = default;
};

namespace detail {

// Earliest-arrival search from (start_cell, a) to (target_cell, b).
inline std::optional<std::vector<WitnessSample>> monotone_lift(const SpacetimeComplex& xs, const GridSpec& g,
                                                               int start_cell, int target_cell) {
  const double a = xs.t_a;
  const double b = xs.t_b;
  const int source = xs.piece_at(start_cell, a);
  const int target = xs.piece_at(target_cell, b);
  if (source < 0 || target < 0) return std::nullopt;
  const std::size_t n = xs.id.size();
  constexpr double kNever = std::numeric_limits<double>::infinity();
  std::vector<double> arrival(n, kNever);
  std::vector<int> pred(n, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  arrival[source] = a;
  queue.push({a, source});
  while (!queue.empty()) {
    const auto [t, p] = queue.top();
    queue.pop();
    if (t > arrival[p]) continue;
    if (p == target) break;
    const int c = xs.id[p];
    for (int dir = 0; dir < 4; ++dir) {
      const int nc = neighbour(g, c, dir);
      if (nc < 0) continue;
      for (int q = xs.first[nc]; q < xs.first[nc + 1]; ++q) {
        const double move = std::max(t, xs.span[q].lo);
        if (!(move < std::min(xs.span[p].hi, xs.span[q].hi))) continue;
        if (move < arrival[q]) {
          arrival[q] = move;
          pred[q] = p;
          queue.push({move, q});
        }
      }
    }
  }
  if (!(arrival[target] < b)) return std::nullopt;
  std::vector<int> chain;
  for (int p = target; p >= 0; p = pred[p]) chain.push_back(p);
  std::reverse(chain.begin(), chain.end());
  // Move i enters chain[i]; it must happen after arrival and before either
  // piece ends, and before every later deadline.
  const std::size_t m = chain.size();
  std::vector<double> deadline(m, b);
  for (std::size_t i = m; i-- > 1;) {
    const double h = std::min(xs.span[chain[i - 1]].hi, xs.span[chain[i]].hi);
    deadline[i] = std::min(h, i + 1 < m ? deadline[i + 1] : b);
  }
  std::vector<WitnessSample> out{{a, start_cell}};
  double now = a;
  for (std::size_t i = 1; i < m; ++i) {
    std::size_t run = 1;
    while (i + run < m && deadline[i + run] == deadline[i]) ++run;
    const double lo = std::max(arrival[chain[i]], now);
    const double t = lo + (deadline[i] - lo) / static_cast<double>(run + 1);
    if (!(t > now && t < deadline[i])) return std::nullopt;
    out.push_back({t, xs.id[chain[i]]});
    now = t;
  }
  out.push_back({b, target_cell});
  return out;
}

inline std::vector<int> least_cells(const Labeling& lab) {
  std::vector<int> out(lab.count, -1);
  for (std::size_t c = 0; c < lab.label.size(); ++c)
    if (lab.label[c] >= 0 && out[lab.label[c]] < 0) out[lab.label[c]] = static_cast<int>(c);
  return out;
}

}  // namespace detail

// One path per element (a tuple of X labels, one per fiber). Every segment
// runs between the least cells of the chosen components, so segments are
// independent and a circle path closes where it started.
inline std::vector<WitnessPath> extract_witnesses(const CoverageTimeline& tl, const Samples& samples,
                                                  const std::vector<Labeling>& x_fibers,
                                                  const std::vector<std::vector<int>>& elements) {
  const std::size_t ncob = samples.cobordism_count();
  const std::size_t nf = samples.s.size();
  std::vector<std::vector<int>> anchor(nf);
  for (std::size_t i = 0; i < nf; ++i) anchor[i] = detail::least_cells(x_fibers[i]);
  std::vector<std::vector<std::vector<WitnessSample>>> segments(ncob, std::vector<std::vector<WitnessSample>>(elements.size()));
  parallel_for(ncob, [&](std::size_t k) {
    const auto [a, b] = samples.cobordism(k);
    const std::size_t rk = samples.base == TimeBase::Circle ? (k + 1) % nf : k + 1;
    const SpacetimeComplex xs = spacetime_components(tl, a, b, Region::Uncovered);
    for (std::size_t e = 0; e < elements.size(); ++e) {
      const int from = anchor[k][elements[e][k]];
      const int to = anchor[rk][elements[e][rk]];
      auto lift = detail::monotone_lift(xs, tl.grid(), from, to);
      if (!lift)
        throw AnalysisError("no monotone lift at this resolution",
                            "element " + std::to_string(e) + " has no forward path through cobordism " + std::to_string(k));
      segments[k][e] = std::move(*lift);
    }
  });
  std::vector<WitnessPath> out(elements.size());
  for (std::size_t e = 0; e < elements.size(); ++e) {
    auto& path = out[e].samples;
    for (std::size_t k = 0; k < ncob; ++k) {
      const auto& seg = segments[k][e];
      path.insert(path.end(), path.empty() ? seg.begin() : seg.begin() + 1, seg.end());
    }
  }
  return out;
}

// Independent re-check by direct point tests at cell centers: times strictly
// increase and span the base, every sample is uncovered at its time, each
// step goes to a face neighbour, and the cell left behind is still uncovered
// at the moment of the step. Throws "invalid witness" on the first failure.
inline void verify_witness(const Scenario& s, const GridSpec& g, const WitnessPath& w) {
  auto fail = [](const std::string& what) { throw AnalysisError("invalid witness", what); };
  const auto& p = w.samples;
  if (p.size() < 2) fail("fewer than two samples");
  const double span = p.back().t - p.front().t;
  if (s.time_base == TimeBase::Interval && (p.front().t != kTimeStart || p.back().t != kTimeEnd))
    fail("path does not span [0, 1]");
  if (s.time_base == TimeBase::Circle && (std::abs(span - 1.0) > 1e-12 || p.front().cell != p.back().cell))
    fail("path does not close after one period");
  auto open = [&](int cell, double t) {
    return point_uncovered(s, s.time_base == TimeBase::Circle ? wrap_time(t) : t, g.center(cell));
  };
  for (std::size_t k = 0; k < p.size(); ++k) {
    const std::string at = "sample " + std::to_string(k);
    if (p[k].cell < 0 || p[k].cell >= g.cell_count()) fail(at + ": cell outside the grid");
    if (!open(p[k].cell, p[k].t)) fail(at + ": covered at t = " + std::to_string(p[k].t));
    if (k == 0) continue;
    if (!(p[k].t > p[k - 1].t)) fail(at + ": time does not increase");
    if (p[k].cell == p[k - 1].cell) continue;
    const int di = std::abs(g.column(p[k].cell) - g.column(p[k - 1].cell));
    const int dj = std::abs(g.row(p[k].cell) - g.row(p[k - 1].cell));
    if (di + dj != 1) fail(at + ": step to a non-adjacent cell");
    if (!open(p[k - 1].cell, p[k].t)) fail(at + ": cell left behind is covered at the step");
  }
}

inline nlohmann::json witness_to_json(const WitnessPath& w, const GridSpec& g, int dimension) {
  auto samples = nlohmann::json::array();
  for (const auto& x : w.samples) {
    const Point c = g.center(x.cell);
    samples.push_back({x.t, dimension == 1 ? nlohmann::json::array({c.x}) : nlohmann::json::array({c.x, c.y})});
  }
  return {{"samples", std::move(samples)}};
}

}  // namespace evasion
