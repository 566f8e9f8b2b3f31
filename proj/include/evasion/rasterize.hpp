#pragma once

// Spacetime cubical discretization of the uncovered region.
//
// Cells are axis-aligned squares of side h covering the bounding box of the
// domain (a single row of cells in dimension 1). Coverage is sampled at cell
// centers. Connectivity conventions:
//   uncovered X  : face adjacency (4-neighbours)
//   covered   C  : 8-neighbours (closed cells), collar included
//   boundary  B  : the interface edges between an uncovered cell and a
//                  non-uncovered face neighbour, oriented with the uncovered
//                  cell on the left and chained into loops (left turn first
//                  at pinch vertices). Its components are the boundary loops
//                  of X, so |pi0 B| = |pi0 X| + b1(X) and each loop lies in
//                  one X component. In dimension 1 only the left and right
//                  sides count and each is its own component (the two ends
//                  of a gap).
// A cobordism adds temporal adjacency between the same cell (or edge) at
// consecutive slices when it belongs to the region in both.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "evasion/error.hpp"
#include "evasion/parallel.hpp"
#include "evasion/scenario.hpp"
#include "evasion/union_find.hpp"

namespace evasion {

struct GridSpec {
  double cell_size = 0.0;
  double x0 = 0.0;  // lower-left corner of the bounding box
  double y0 = 0.0;
  int nx = 0;
  int ny = 0;
  int fine_samples = 2;  // slices per cobordism, endpoints included

  int cell_count() const { return nx * ny; }
  int column(int cell) const { return cell % nx; }
  int row(int cell) const { return cell / nx; }
  int index(int i, int j) const { return j * nx + i; }
  Point center(int cell) const {
    return {x0 + (column(cell) + 0.5) * cell_size, y0 + (row(cell) + 0.5) * cell_size};
  }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline constexpr int kMaxCellsAcross = 4096;

inline GridSpec make_grid(const Scenario& s, double cell_size, int fine_samples) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw Error("invalid grid", "cell_size must be positive");
  if (fine_samples < 2) throw Error("invalid grid", "fine_time_samples must be at least 2");
  if (s.fence_width < cell_size)
    throw Error("invalid grid", "fence_width must be at least one cell wide (cell_size " + std::to_string(cell_size) + ")");
  const double extent = 2.0 * s.domain.radius;
  const double cells = std::ceil(extent / cell_size - 1e-9);
  if (cells > kMaxCellsAcross) throw Error("invalid grid", "more than " + std::to_string(kMaxCellsAcross) + " cells across");
  GridSpec g;
  g.cell_size = cell_size;
  g.nx = static_cast<int>(cells);
  g.ny = s.dimension == 1 ? 1 : g.nx;
  g.x0 = s.domain.center.x - s.domain.radius;
  g.y0 = s.dimension == 1 ? s.domain.center.y - 0.5 * cell_size : s.domain.center.y - s.domain.radius;
  g.fine_samples = fine_samples;
  return g;
}

// Grid with `cells_across` cells spanning the domain diameter.
inline GridSpec make_grid_cells(const Scenario& s, int cells_across, int fine_samples) {
  if (cells_across < 1) throw Error("invalid grid", "cells across must be positive");
  return make_grid(s, 2.0 * s.domain.radius / cells_across, fine_samples);
}

enum class CellState : std::uint8_t { Outside, Collar, Covered, Uncovered };

// Static classification of a point: outside the domain, in the fence collar,
// or in the interior where sensors decide coverage.
inline CellState static_state(const Scenario& s, Point p) {
  const double r = s.domain.radius;
  const double inner = r - s.fence_width;
  if (s.dimension == 1) {
    const double d = std::abs(p.x - s.domain.center.x);
    if (d > r) return CellState::Outside;
    return d < inner ? CellState::Uncovered : CellState::Collar;
  }
  const double d2 = squared_distance(p, s.domain.center);
  if (d2 > r * r) return CellState::Outside;
  return d2 < inner * inner ? CellState::Uncovered : CellState::Collar;
}

inline bool covered_by_sensor(Point p, Point sensor, double radius) {
  return squared_distance(p, sensor) <= radius * radius;
}

// Coverage predicate at a single point; rasterization applies exactly this
// test to cell centers.
inline bool point_uncovered(const Scenario& s, double t, Point p) {
  if (static_state(s, p) != CellState::Uncovered) return false;
  for (const auto& track : s.tracks)
    if (covered_by_sensor(p, sensor_position(track, t, s.time_base), s.sensing_radius)) return false;
  return true;
}

struct FiberComplex {
  double time = 0.0;
  GridSpec grid;
  std::vector<CellState> cells;
  std::vector<std::uint8_t> boundary;  // discrete essential boundary B

  bool uncovered(int c) const { return cells[c] == CellState::Uncovered; }
  bool covered_region(int c) const { return cells[c] == CellState::Covered || cells[c] == CellState::Collar; }
  bool on_boundary(int c) const { return boundary[c] != 0; }
  int uncovered_count() const {
    int n = 0;
    for (auto c : cells) n += c == CellState::Uncovered;
    return n;
  }
};

struct CobordismComplex {
  double t_a = 0.0;
  double t_b = 0.0;
  std::vector<FiberComplex> slices;  // uniform times, endpoints included
};

namespace detail {

inline void mark_boundary(FiberComplex& f) {
  const auto& g = f.grid;
  f.boundary.assign(f.cells.size(), 0);
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!f.uncovered(c)) continue;
    const int i = g.column(c);
    const int j = g.row(c);
    auto open = [&](int ii, int jj) {
      if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) return false;
      return f.uncovered(g.index(ii, jj));
    };
    bool edge = !open(i - 1, j) || !open(i + 1, j);
    if (g.ny > 1) edge = edge || !open(i, j - 1) || !open(i, j + 1);
    f.boundary[c] = edge ? 1 : 0;
  }
}

}  // namespace detail

// Coverage bitmap and boundary cells at time t.
inline FiberComplex rasterize_fiber(const Scenario& s, double t, const GridSpec& g) {
  FiberComplex f;
  f.time = t;
  f.grid = g;
  const int n = g.cell_count();
  f.cells.resize(n);
  for (int c = 0; c < n; ++c) f.cells[c] = static_state(s, g.center(c));
  const double r = s.sensing_radius;
  for (const auto& track : s.tracks) {
    const Point q = sensor_position(track, t, s.time_base);
    const int i_lo = std::max(0, static_cast<int>(std::floor((q.x - r - g.x0) / g.cell_size)) - 1);
    const int i_hi = std::min(g.nx - 1, static_cast<int>(std::floor((q.x + r - g.x0) / g.cell_size)) + 1);
    const int j_lo = std::max(0, static_cast<int>(std::floor((q.y - r - g.y0) / g.cell_size)) - 1);
    const int j_hi = std::min(g.ny - 1, static_cast<int>(std::floor((q.y + r - g.y0) / g.cell_size)) + 1);
    for (int j = j_lo; j <= j_hi; ++j) {
      for (int i = i_lo; i <= i_hi; ++i) {
        const int c = g.index(i, j);
        if (f.cells[c] == CellState::Uncovered && covered_by_sensor(g.center(c), q, r)) f.cells[c] = CellState::Covered;
      }
    }
  }
  detail::mark_boundary(f);
  return f;
}

// Slice k sits at t_a + k (t_b - t_a) / (n - 1). On a circular base t_b may
// exceed 1 (a wrapped arc); slice times stay unwrapped.
inline CobordismComplex rasterize_cobordism(const Scenario& s, double t_a, double t_b, const GridSpec& g,
                                            int slices = 0) {
  if (slices <= 0) slices = g.fine_samples;
  if (!(t_a < t_b)) throw Error("degenerate interval", "cobordism needs t_a < t_b");
  if (s.time_base == TimeBase::Interval && (t_a < kTimeStart || t_b > kTimeEnd))
    throw Error("degenerate interval", "cobordism outside [0, 1]");
  if (s.time_base == TimeBase::Circle && t_b - t_a > 1.0) throw Error("degenerate interval", "arc longer than the circle");
  if (slices < 2) throw Error("invalid grid", "a cobordism needs at least two slices");
  CobordismComplex cob;
  cob.t_a = t_a;
  cob.t_b = t_b;
  cob.slices.resize(slices);
  parallel_for(static_cast<std::size_t>(slices), [&](std::size_t k) {
    const double t = k + 1 == static_cast<std::size_t>(slices)
                         ? t_b
                         : t_a + (t_b - t_a) * static_cast<double>(k) / static_cast<double>(slices - 1);
    cob.slices[k] = rasterize_fiber(s, t, g);
    cob.slices[k].time = t;
  });
  return cob;
}

// ---------------------------------------------------------------------------
// Connected components

enum class Region { Uncovered, Boundary, Covered };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::Uncovered: return "uncovered";
    case Region::Boundary: return "boundary";
    case Region::Covered: return "covered";
  }
  return "?";
}

// label[i] is the component of node i, or -1 outside the region. Nodes are
// cells, or cell * 4 + side for the boundary (side 0..3 = bottom, right, top,
// left, which is also the direction of travel along the edge). For a
// cobordism node i is slice * nodes_per_slice + node. Labels are numbered in
// the order of each component's least node index.
struct Labeling {
  std::vector<int> label;
  int count = 0;
};

inline int nodes_per_slice(const GridSpec& g, Region region) {
  return region == Region::Boundary ? 4 * g.cell_count() : g.cell_count();
}

// Neighbour of `cell` in direction dir (0 = +x, 1 = +y, 2 = -x, 3 = -y), or -1.
inline int neighbour(const GridSpec& g, int cell, int dir) {
  static constexpr int dx[4] = {1, 0, -1, 0};
  static constexpr int dy[4] = {0, 1, 0, -1};
  const int i = g.column(cell) + dx[dir];
  const int j = g.row(cell) + dy[dir];
  if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) return -1;
  return g.index(i, j);
}

// The cell across boundary side `side` is in direction side + 3.
inline int across(const GridSpec& g, int cell, int side) { return neighbour(g, cell, (side + 3) % 4); }

// Generic over the uncovered predicate so spacetime code can reuse it.
template <class Open>
bool is_interface_edge(const GridSpec& g, int cell, int side, Open&& open) {
  if (g.ny == 1 && side % 2 == 0) return false;
  if (!open(cell)) return false;
  const int n = across(g, cell, side);
  return n < 0 || !open(n);
}

// Next edge of the boundary loop after interface edge (cell, side).
template <class Open>
int successor_edge(const GridSpec& g, int cell, int side, Open&& open) {
  const int ahead = neighbour(g, cell, side);
  if (ahead < 0 || !open(ahead)) return cell * 4 + (side + 1) % 4;
  const int diag = across(g, ahead, side);
  if (diag < 0 || !open(diag)) return ahead * 4 + side;
  return diag * 4 + (side + 3) % 4;
}

inline bool in_region(const FiberComplex& f, int node, Region region) {
  switch (region) {
    case Region::Uncovered: return f.uncovered(node);
    case Region::Boundary:
      return is_interface_edge(f.grid, node / 4, node % 4, [&](int c) { return f.uncovered(c); });
    case Region::Covered: return f.covered_region(node);
  }
  return false;
}

// Calls link(a, b) for adjacent region nodes of one slice (every adjacent
// pair at least once).
template <class Link>
void for_each_adjacency(const FiberComplex& f, Region region, Link&& link) {
  const auto& g = f.grid;
  if (region == Region::Boundary) {
    if (g.ny == 1) return;
    auto open = [&](int c) { return f.uncovered(c); };
    for (int c = 0; c < g.cell_count(); ++c) {
      if (!f.uncovered(c)) continue;
      for (int side = 0; side < 4; ++side)
        if (is_interface_edge(g, c, side, open)) link(c * 4 + side, successor_edge(g, c, side, open));
    }
    return;
  }
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!in_region(f, c, region)) continue;
    const int i = g.column(c);
    const int j = g.row(c);
    if (i + 1 < g.nx && in_region(f, c + 1, region)) link(c, c + 1);
    if (j + 1 >= g.ny) continue;
    const int up = c + g.nx;
    if (in_region(f, up, region)) link(c, up);
    if (region != Region::Covered) continue;
    if (i + 1 < g.nx && in_region(f, up + 1, region)) link(c, up + 1);
    if (i > 0 && in_region(f, up - 1, region)) link(c, up - 1);
  }
}

namespace detail {

inline Labeling canonical_labels(UnionFind& uf, const std::vector<std::uint8_t>& member) {
  Labeling out;
  out.label.assign(member.size(), -1);
  std::vector<int> root_label(member.size(), -1);
  for (std::size_t i = 0; i < member.size(); ++i) {
    if (!member[i]) continue;
    const auto root = uf.find(static_cast<std::uint32_t>(i));
    if (root_label[root] < 0) root_label[root] = out.count++;
    out.label[i] = root_label[root];
  }
  return out;
}

}  // namespace detail

inline Labeling components(const FiberComplex& f, Region region) {
  const int n = nodes_per_slice(f.grid, region);
  UnionFind uf(n);
  std::vector<std::uint8_t> member(n);
  for (int v = 0; v < n; ++v) member[v] = in_region(f, v, region);
  for_each_adjacency(f, region, [&](int a, int b) { uf.unite(a, b); });
  return detail::canonical_labels(uf, member);
}

inline Labeling components(const CobordismComplex& cob, Region region) {
  if (cob.slices.empty()) return {};
  const int n = nodes_per_slice(cob.slices.front().grid, region);
  const std::size_t total = static_cast<std::size_t>(n) * cob.slices.size();
  UnionFind uf(total);
  std::vector<std::uint8_t> member(total);
  for (std::size_t k = 0; k < cob.slices.size(); ++k) {
    const auto& f = cob.slices[k];
    const std::uint32_t off = static_cast<std::uint32_t>(k * n);
    for (int v = 0; v < n; ++v) member[off + v] = in_region(f, v, region);
    for_each_adjacency(f, region, [&](int a, int b) { uf.unite(off + a, off + b); });
  }
  for (std::size_t k = 0; k + 1 < cob.slices.size(); ++k) {
    const std::uint32_t off = static_cast<std::uint32_t>(k * n);
    for (int v = 0; v < n; ++v)
      if (member[off + v] && member[off + n + v]) uf.unite(off + v, off + n + v);
  }
  return detail::canonical_labels(uf, member);
}

// Cell carrying a node of `region`.
inline int node_cell(int node, Region region) { return region == Region::Boundary ? node / 4 : node; }

// Cells of each component, each list sorted ascending.
inline std::vector<std::vector<int>> component_cells(const Labeling& lab) {
  std::vector<std::vector<int>> out(lab.count);
  for (std::size_t i = 0; i < lab.label.size(); ++i)
    if (lab.label[i] >= 0) out[lab.label[i]].push_back(static_cast<int>(i));
  return out;
}

// Rank of H1 of the uncovered region: complement components (8-connected,
// the whole bounding box) minus the unbounded one.
inline int first_betti_uncovered(const FiberComplex& f) {
  const auto& g = f.grid;
  if (g.ny == 1) return 0;
  const int n = g.cell_count();
  UnionFind uf(n);
  std::vector<std::uint8_t> member(n);
  for (int c = 0; c < n; ++c) member[c] = !f.uncovered(c);
  for (int c = 0; c < n; ++c) {
    if (!member[c]) continue;
    const int i = g.column(c);
    const int j = g.row(c);
    if (i + 1 < g.nx && member[c + 1]) uf.unite(c, c + 1);
    if (j + 1 >= g.ny) continue;
    const int up = c + g.nx;
    if (member[up]) uf.unite(c, up);
    if (i + 1 < g.nx && member[up + 1]) uf.unite(c, up + 1);
    if (i > 0 && member[up - 1]) uf.unite(c, up - 1);
  }
  return detail::canonical_labels(uf, member).count - 1;
}

// Debug dump: plain PBM, 1 = not uncovered, top row first.
inline void write_pbm(const FiberComplex& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("unwritable output", path);
  const auto& g = f.grid;
  out << "P1\n" << g.nx << " " << g.ny << "\n";
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) out << (f.uncovered(g.index(i, j)) ? '0' : '1') << (i + 1 < g.nx ? " " : "");
    out << "\n";
  }
}

}  // namespace evasion
