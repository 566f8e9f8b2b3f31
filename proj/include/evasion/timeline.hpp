#pragma once

// Exact coverage history of every grid cell. Tracks are piecewise linear, so
// the times a cell center lies in a sensing ball are finitely many closed
// intervals, found by solving one quadratic per (sensor, segment). Between
// consecutive flips the raster is constant, which makes the spacetime complex
// over any time range a finite graph of (cell, interval) pieces without
// choosing slices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "evasion/error.hpp"
#include "evasion/rasterize.hpp"
#include "evasion/scenario.hpp"
#include "evasion/union_find.hpp"

namespace evasion {

struct TimeInterval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

struct Flip {
  double t = 0.0;
  int cell = -1;
  bool opens = false;  // covered -> uncovered
};

// Covered intervals shorter than this are tangential grazes and are dropped.
inline constexpr double kGrazeLength = 1e-12;

class CoverageTimeline {
 public:
  CoverageTimeline() = default;

  CoverageTimeline(const Scenario& s, const GridSpec& g) : grid_(g), base_(s.time_base) {
    const int n = g.cell_count();
    statics_.resize(n);
    interior_.resize(n);
    covered_.resize(n);
    for (int c = 0; c < n; ++c) {
      statics_[c] = static_state(s, g.center(c));
      interior_[c] = statics_[c] == CellState::Uncovered;
    }
    const double r = s.sensing_radius;
    for (const auto& track : s.tracks) {
      const auto& w = track.waypoints;
      for (std::size_t k = 0; k + 1 < w.size(); ++k) add_segment(w[k], w[k + 1], r);
    }
    for (auto& list : covered_) merge(list);
  }

  const GridSpec& grid() const { return grid_; }
  TimeBase base() const { return base_; }
  bool interior(int c) const { return interior_[c] != 0; }
  CellState static_kind(int c) const { return statics_[c]; }
  const std::vector<TimeInterval>& covered_intervals(int c) const { return covered_[c]; }

  bool uncovered_at(int c, double t) const {
    if (!interior_[c]) return false;
    t = base_ == TimeBase::Circle ? wrap_time(t) : t;
    for (const auto& iv : covered_[c])
      if (iv.lo <= t && t <= iv.hi) return false;
    if (base_ == TimeBase::Circle && t == 0.0) {
      for (const auto& iv : covered_[c])
        if (iv.hi == kTimeEnd) return false;
    }
    return true;
  }

  // Coverage changes strictly inside the base, sorted by (t, cell).
  std::vector<Flip> flips() const {
    std::vector<Flip> out;
    for (int c = 0; c < grid_.cell_count(); ++c) {
      for (const auto& iv : covered_[c]) {
        if (iv.lo > kTimeStart) out.push_back({iv.lo, c, false});
        if (iv.hi < kTimeEnd) out.push_back({iv.hi, c, true});
      }
    }
    std::sort(out.begin(), out.end(), [](const Flip& a, const Flip& b) { return a.t != b.t ? a.t < b.t : a.cell < b.cell; });
    return out;
  }

  // Flip times of one cell inside the open range (a, b); b - a <= 1 on a
  // circle, where times are unwrapped.
  std::vector<double> flip_times(int c, double a, double b) const {
    std::vector<double> out;
    for (const auto& iv : covered_unwrapped(c, a, b)) {
      if (iv.lo > a && iv.lo < b) out.push_back(iv.lo);
      if (iv.hi > a && iv.hi < b) out.push_back(iv.hi);
    }
    return out;
  }

  // Covered intervals of a cell clipped to [a, b] (unwrapped on a circle).
  std::vector<TimeInterval> covered_unwrapped(int c, double a, double b) const {
    std::vector<TimeInterval> out;
    const int shifts = base_ == TimeBase::Circle ? 2 : 1;
    for (int k = 0; k < shifts; ++k) {
      for (const auto& iv : covered_[c]) {
        const double lo = iv.lo + k;
        const double hi = iv.hi + k;
        if (hi < a || lo > b) continue;
        if (!out.empty() && lo <= out.back().hi) {
          out.back().hi = std::max(out.back().hi, std::min(hi, b));
        } else {
          out.push_back({std::max(lo, a), std::min(hi, b)});
        }
      }
    }
    return out;
  }

  // Maximal uncovered pieces of a cell within [a, b].
  std::vector<TimeInterval> uncovered_pieces(int c, double a, double b) const {
    std::vector<TimeInterval> out;
    if (!interior_[c]) return out;
    double cursor = a;
    for (const auto& iv : covered_unwrapped(c, a, b)) {
      if (iv.lo > cursor) out.push_back({cursor, iv.lo});
      cursor = iv.hi;
    }
    if (cursor < b) out.push_back({cursor, b});
    return out;
  }

  // Maximal pieces within [a, b] where the cell belongs to the covered region
  // (collar cells throughout; outside cells never).
  std::vector<TimeInterval> covered_pieces(int c, double a, double b) const {
    if (statics_[c] == CellState::Collar) return {{a, b}};
    if (!interior_[c]) return {};
    std::vector<TimeInterval> out;
    for (const auto& iv : covered_unwrapped(c, a, b))
      if (iv.hi > iv.lo) out.push_back(iv);
    return out;
  }

 private:
  void add_segment(const Waypoint& a, const Waypoint& b, double r) {
    const double T = b.t - a.t;
    const double vx = (b.position.x - a.position.x) / T;
    const double vy = (b.position.y - a.position.y) / T;
    const auto& g = grid_;
    const double x_lo = std::min(a.position.x, b.position.x) - r;
    const double x_hi = std::max(a.position.x, b.position.x) + r;
    const double y_lo = std::min(a.position.y, b.position.y) - r;
    const double y_hi = std::max(a.position.y, b.position.y) + r;
    const int i_lo = std::max(0, static_cast<int>(std::floor((x_lo - g.x0) / g.cell_size)) - 1);
    const int i_hi = std::min(g.nx - 1, static_cast<int>(std::floor((x_hi - g.x0) / g.cell_size)) + 1);
    const int j_lo = std::max(0, static_cast<int>(std::floor((y_lo - g.y0) / g.cell_size)) - 1);
    const int j_hi = std::min(g.ny - 1, static_cast<int>(std::floor((y_hi - g.y0) / g.cell_size)) + 1);
    const double A = vx * vx + vy * vy;
    for (int j = j_lo; j <= j_hi; ++j) {
      for (int i = i_lo; i <= i_hi; ++i) {
        const int c = g.index(i, j);
        if (!interior_[c]) continue;
        const Point p = g.center(c);
        const double dx = p.x - a.position.x;
        const double dy = p.y - a.position.y;
        const double C = dx * dx + dy * dy - r * r;
        double lo = 0.0;
        double hi = T;
        if (A == 0.0) {
          if (C > 0.0) continue;
        } else {
          const double B = dx * vx + dy * vy;
          const double disc = B * B - A * C;
          if (disc < 0.0) continue;
          const double root = std::sqrt(disc);
          lo = std::max(0.0, (B - root) / A);
          hi = std::min(T, (B + root) / A);
          if (lo > hi) continue;
        }
        const double t_lo = lo == 0.0 ? a.t : a.t + lo;
        const double t_hi = hi == T ? b.t : a.t + hi;
        covered_[c].push_back({t_lo, t_hi});
      }
    }
  }

  static void merge(std::vector<TimeInterval>& list) {
    std::sort(list.begin(), list.end(), [](const TimeInterval& x, const TimeInterval& y) { return x.lo < y.lo; });
    std::vector<TimeInterval> out;
    for (const auto& iv : list) {
      if (!out.empty() && iv.lo <= out.back().hi + kGrazeLength) {
        out.back().hi = std::max(out.back().hi, iv.hi);
      } else {
        out.push_back(iv);
      }
    }
    std::erase_if(out, [](const TimeInterval& iv) { return iv.hi - iv.lo < kGrazeLength && iv.lo > kTimeStart && iv.hi < kTimeEnd; });
    list = std::move(out);
  }

  GridSpec grid_;
  TimeBase base_ = TimeBase::Interval;
  std::vector<CellState> statics_;
  std::vector<std::uint8_t> interior_;
  std::vector<std::vector<TimeInterval>> covered_;
};

// ---------------------------------------------------------------------------
// Spacetime complex over [a, b] built from pieces

// Nodes are (id, interval) pieces sorted by id then time; id is a cell, or
// cell * 4 + side for the boundary. Pieces of adjacent ids are adjacent when
// their intervals overlap in more than a point.
struct SpacetimeComplex {
  double t_a = 0.0;
  double t_b = 0.0;
  Region region = Region::Uncovered;
  std::vector<int> id;
  std::vector<TimeInterval> span;
  std::vector<int> first;  // pieces of id k are first[k] .. first[k+1]-1
  Labeling labels;

  // Piece of `node_id` containing time t, or -1.
  int piece_at(int node_id, double t) const {
    for (int k = first[node_id]; k < first[node_id + 1]; ++k)
      if (span[k].lo <= t && t <= span[k].hi) return k;
    return -1;
  }
};

namespace detail {

template <class Link>
void link_overlaps(const SpacetimeComplex& st, int a, int b, Link&& link) {
  int p = st.first[a];
  int q = st.first[b];
  const int pe = st.first[a + 1];
  const int qe = st.first[b + 1];
  while (p < pe && q < qe) {
    const double lo = std::max(st.span[p].lo, st.span[q].lo);
    const double hi = std::min(st.span[p].hi, st.span[q].hi);
    if (lo < hi) link(p, q);
    if (st.span[p].hi < st.span[q].hi) {
      ++p;
    } else {
      ++q;
    }
  }
}

inline std::vector<TimeInterval> intersect(const std::vector<TimeInterval>& x, const std::vector<TimeInterval>& y) {
  std::vector<TimeInterval> out;
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < x.size() && q < y.size()) {
    const double lo = std::max(x[p].lo, y[q].lo);
    const double hi = std::min(x[p].hi, y[q].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (x[p].hi < y[q].hi) {
      ++p;
    } else {
      ++q;
    }
  }
  return out;
}

// Complement of sorted disjoint intervals within [a, b].
inline std::vector<TimeInterval> complement(const std::vector<TimeInterval>& x, double a, double b) {
  std::vector<TimeInterval> out;
  double cursor = a;
  for (const auto& iv : x) {
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = std::max(cursor, iv.hi);
  }
  if (cursor < b) out.push_back({cursor, b});
  return out;
}

}  // namespace detail

inline SpacetimeComplex spacetime_components(const CoverageTimeline& tl, double a, double b, Region region) {
  const auto& g = tl.grid();
  SpacetimeComplex st;
  st.t_a = a;
  st.t_b = b;
  st.region = region;
  const int ids = nodes_per_slice(g, region);
  st.first.assign(ids + 1, 0);
  std::vector<std::vector<TimeInterval>> open(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) open[c] = tl.uncovered_pieces(c, a, b);
  auto append = [&](int node_id, const std::vector<TimeInterval>& pieces) {
    for (const auto& iv : pieces) {
      st.id.push_back(node_id);
      st.span.push_back(iv);
    }
  };
  for (int v = 0; v < ids; ++v) {
    st.first[v] = static_cast<int>(st.id.size());
    switch (region) {
      case Region::Uncovered: append(v, open[v]); break;
      case Region::Covered: append(v, tl.covered_pieces(v, a, b)); break;
      case Region::Boundary: {
        const int c = v / 4;
        const int side = v % 4;
        if (open[c].empty() || (g.ny == 1 && side % 2 == 0)) break;
        const int n = across(g, c, side);
        if (n < 0 || !tl.interior(n)) {
          append(v, open[c]);
        } else {
          append(v, detail::intersect(open[c], detail::complement(open[n], a, b)));
        }
        break;
      }
    }
  }
  st.first[ids] = static_cast<int>(st.id.size());
  UnionFind uf(st.id.size());
  auto unite = [&](int p, int q) { uf.unite(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(q)); };
  if (region == Region::Boundary) {
    if (g.ny > 1) {
      for (std::size_t k = 0; k < st.id.size(); ++k) {
        const int c = st.id[k] / 4;
        const int side = st.id[k] % 4;
        const int ahead = neighbour(g, c, side);
        const int diag = ahead < 0 ? -1 : across(g, ahead, side);
        std::vector<double> cuts{st.span[k].lo, st.span[k].hi};
        for (int cell : {ahead, diag}) {
          if (cell < 0 || !tl.interior(cell)) continue;
          for (double t : tl.flip_times(cell, st.span[k].lo, st.span[k].hi)) cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t m = 0; m + 1 < cuts.size(); ++m) {
          if (!(cuts[m] < cuts[m + 1])) continue;
          const double mid = 0.5 * (cuts[m] + cuts[m + 1]);
          auto is_open = [&](int cell) {
            for (const auto& iv : open[cell])
              if (iv.lo < mid && mid < iv.hi) return true;
            return false;
          };
          const int next = successor_edge(g, c, side, is_open);
          const int q = st.piece_at(next, mid);
          if (q < 0) throw Error("invalid complex", "boundary loop broken in spacetime");
          unite(static_cast<int>(k), q);
        }
      }
    }
  } else {
    for (int c = 0; c < g.cell_count(); ++c) {
      if (st.first[c] == st.first[c + 1]) continue;
      const int i = g.column(c);
      const int j = g.row(c);
      if (i + 1 < g.nx) detail::link_overlaps(st, c, c + 1, unite);
      if (j + 1 >= g.ny) continue;
      detail::link_overlaps(st, c, c + g.nx, unite);
      if (region != Region::Covered) continue;
      if (i + 1 < g.nx) detail::link_overlaps(st, c, c + g.nx + 1, unite);
      if (i > 0) detail::link_overlaps(st, c, c + g.nx - 1, unite);
    }
  }
  std::vector<std::uint8_t> member(st.id.size(), 1);
  st.labels = detail::canonical_labels(uf, member);
  return st;
}

// Raster at time t, identical to rasterize_fiber up to rounding at flips.
inline FiberComplex fiber_at(const CoverageTimeline& tl, double t) {
  const auto& g = tl.grid();
  FiberComplex f;
  f.time = t;
  f.grid = g;
  f.cells.resize(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) {
    const CellState k = tl.static_kind(c);
    f.cells[c] = k != CellState::Uncovered ? k : tl.uncovered_at(c, t) ? CellState::Uncovered : CellState::Covered;
  }
  detail::mark_boundary(f);
  return f;
}

}  // namespace evasion
