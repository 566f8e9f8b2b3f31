#pragma once

// Holes of a planar cell set, their boundary cycles, winding numbers, and
// the image partition on boundary components given by pairing each cycle
// with a representative point (planar Alexander duality).

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evasion/error.hpp"
#include "evasion/limit.hpp"
#include "evasion/rasterize.hpp"
#include "evasion/union_find.hpp"

namespace evasion {

// Lattice point; cell (i, j) is the square [i, i+1] x [j, j+1].
struct Vertex {
  long long x = 0;
  long long y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

// Closed path through unit lattice steps; the step from back() to front()
// closes it.
struct EdgeCycle {
  std::vector<Vertex> vertices;
  long long min_x = 0, max_x = 0, min_y = 0, max_y = 0;

  // Twice the signed area (positive for counterclockwise).
  long long doubled_area() const {
    long long a = 0;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      const auto& p = vertices[k];
      const auto& q = vertices[(k + 1) % vertices.size()];
      a += p.x * q.y - q.x * p.y;
    }
    return a;
  }
};

struct Hole {
  int representative = -1;          // least cell of the hole
  std::vector<EdgeCycle> cycles;    // hole on the left; the outer one counterclockwise
};

struct HoleBasis {
  std::vector<Hole> holes;
  std::vector<int> hole_of;  // per cell: hole index or -1
};

namespace detail {

inline void close_bounds(EdgeCycle& c) {
  c.min_x = c.max_x = c.vertices.front().x;
  c.min_y = c.max_y = c.vertices.front().y;
  for (const auto& v : c.vertices) {
    c.min_x = std::min(c.min_x, v.x);
    c.max_x = std::max(c.max_x, v.x);
    c.min_y = std::min(c.min_y, v.y);
    c.max_y = std::max(c.max_y, v.y);
  }
}

// Direction index: 0 = +x, 1 = +y, 2 = -x, 3 = -y.
inline Vertex step(Vertex v, int dir) {
  static constexpr int dx[4] = {1, 0, -1, 0};
  static constexpr int dy[4] = {0, 1, 0, -1};
  return {v.x + dx[dir], v.y + dy[dir]};
}

// Loops of the boundary of one hole. Edges keep the hole on their left; at a
// vertex with two outgoing edges the left turn is taken, so holes touching
// only at a corner are traced separately.
inline std::vector<EdgeCycle> trace_cycles(const GridSpec& g, const std::vector<int>& cells,
                                           const std::vector<int>& hole_of, int h) {
  std::map<Vertex, std::vector<int>> out;  // vertex -> outgoing directions
  auto inside = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < g.nx && j < g.ny && hole_of[g.index(i, j)] == h;
  };
  for (int c : cells) {
    const long long i = g.column(c);
    const long long j = g.row(c);
    if (!inside(i, j - 1)) out[{i, j}].push_back(0);
    if (!inside(i + 1, j)) out[{i + 1, j}].push_back(1);
    if (!inside(i, j + 1)) out[{i + 1, j + 1}].push_back(2);
    if (!inside(i - 1, j)) out[{i, j + 1}].push_back(3);
  }
  std::vector<EdgeCycle> cycles;
  for (auto& [start, dirs] : out) {
    while (!dirs.empty()) {
      EdgeCycle cyc;
      Vertex v = start;
      int dir = dirs.back();
      dirs.pop_back();
      for (;;) {
        cyc.vertices.push_back(v);
        v = step(v, dir);
        auto& here = out[v];
        if (here.empty()) break;
        int pick = -1;
        for (int turn : {1, 0, 3}) {  // left, straight, right
          const int want = (dir + turn) % 4;
          auto it = std::find(here.begin(), here.end(), want);
          if (it != here.end()) {
            pick = want;
            here.erase(it);
            break;
          }
        }
        if (pick < 0) throw Error("invalid cycle", "boundary trace stuck");
        dir = pick;
      }
      if (!(v == start)) throw Error("invalid cycle", "boundary trace did not close");
      close_bounds(cyc);
      cycles.push_back(std::move(cyc));
    }
  }
  std::stable_sort(cycles.begin(), cycles.end(),
                   [](const EdgeCycle& a, const EdgeCycle& b) { return a.doubled_area() > b.doubled_area(); });
  return cycles;
}

}  // namespace detail

// Holes of `region`: face-connected components of its complement that do not
// touch the frame of the grid box.
inline HoleBasis holes(const GridSpec& g, const std::vector<std::uint8_t>& region) {
  const int n = g.cell_count();
  if (static_cast<int>(region.size()) != n) throw Error("invalid grid", "region bitmap size mismatch");
  UnionFind uf(n);
  for (int c = 0; c < n; ++c) {
    if (region[c]) continue;
    const int i = g.column(c);
    const int j = g.row(c);
    if (i + 1 < g.nx && !region[c + 1]) uf.unite(c, c + 1);
    if (j + 1 < g.ny && !region[c + g.nx]) uf.unite(c, c + g.nx);
  }
  std::vector<std::uint8_t> framed(n, 0);
  for (int c = 0; c < n; ++c) {
    if (region[c]) continue;
    const int i = g.column(c);
    const int j = g.row(c);
    if (i == 0 || j == 0 || i + 1 == g.nx || j + 1 == g.ny) framed[uf.find(c)] = 1;
  }
  HoleBasis basis;
  basis.hole_of.assign(n, -1);
  std::vector<int> root_hole(n, -1);
  std::vector<std::vector<int>> cells;
  for (int c = 0; c < n; ++c) {
    if (region[c]) continue;
    const auto root = uf.find(c);
    if (framed[root]) continue;
    if (root_hole[root] < 0) {
      root_hole[root] = static_cast<int>(basis.holes.size());
      basis.holes.push_back({c, {}});
      cells.emplace_back();
    }
    basis.hole_of[c] = root_hole[root];
    cells[root_hole[root]].push_back(c);
  }
  for (std::size_t h = 0; h < basis.holes.size(); ++h)
    basis.holes[h].cycles = detail::trace_cycles(g, cells[h], basis.hole_of, static_cast<int>(h));
  return basis;
}

// Signed crossings of the rightward ray from p; upward edges count +1.
// Throws when p lies on the cycle.
inline long long winding(const EdgeCycle& cycle, double px, double py) {
  if (px > static_cast<double>(cycle.max_x) || py < static_cast<double>(cycle.min_y) ||
      py > static_cast<double>(cycle.max_y))
    return 0;
  long long w = 0;
  const std::size_t n = cycle.vertices.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = cycle.vertices[k];
    const auto& b = cycle.vertices[(k + 1) % n];
    const double ax = static_cast<double>(a.x), ay = static_cast<double>(a.y);
    const double bx = static_cast<double>(b.x), by = static_cast<double>(b.y);
    const double cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    if (cross == 0.0 && std::min(ax, bx) <= px && px <= std::max(ax, bx) && std::min(ay, by) <= py &&
        py <= std::max(ay, by))
      throw Error("point on cycle", "winding number undefined on the cycle");
    if (ay <= py) {
      if (by > py && cross > 0.0) ++w;
    } else if (by <= py && cross < 0.0) {
      --w;
    }
  }
  return w;
}

// Partition of pi0(B) induced by the winding functionals of all hole cycles
// of the covered region. Each component is evaluated at the center of the
// uncovered cell of its least edge. `sign` flips every functional.
inline PartitionAlgebra alexander_image(const HoleBasis& basis, const GridSpec& g, const Labeling& b, int sign = 1) {
  if (b.label.size() != static_cast<std::size_t>(nodes_per_slice(g, Region::Boundary)))
    throw Error("invalid grid", "boundary labeling does not match the grid");
  std::vector<int> rep(b.count, -1);
  for (std::size_t v = 0; v < b.label.size(); ++v)
    if (b.label[v] >= 0 && rep[b.label[v]] < 0) rep[b.label[v]] = node_cell(static_cast<int>(v), Region::Boundary);
  std::vector<std::vector<long long>> functionals;
  for (const auto& hole : basis.holes) {
    for (const auto& cycle : hole.cycles) {
      std::vector<long long> v(b.count);
      for (int k = 0; k < b.count; ++k)
        v[k] = sign * winding(cycle, g.column(rep[k]) + 0.5, g.row(rep[k]) + 0.5);
      functionals.push_back(std::move(v));
    }
  }
  return partition_from_functionals(b.count, functionals);
}

// Covered region of a fiber: collar, sensors, and the outside of the domain.
inline std::vector<std::uint8_t> covered_bitmap(const FiberComplex& f) {
  std::vector<std::uint8_t> out(f.cells.size());
  for (std::size_t c = 0; c < f.cells.size(); ++c) out[c] = !f.uncovered(static_cast<int>(c));
  return out;
}

inline PartitionAlgebra alexander_image(const FiberComplex& f, const Labeling& b, int sign = 1) {
  if (f.grid.ny == 1) throw Error("unsupported dimension", "planar homology needs a two-dimensional grid");
  return alexander_image(holes(f.grid, covered_bitmap(f)), f.grid, b, sign);
}

}  // namespace evasion
