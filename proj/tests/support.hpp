#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "evasion/limit.hpp"
#include "evasion/rasterize.hpp"
#include "evasion/zigzag_diagram.hpp"

namespace evasion::testing {

// Every tuple with one element per object (fibers and cobordisms alike),
// kept when each cobordism element is the image of both neighbouring fiber
// elements. Returns the fiber parts, lexicographically sorted.
inline std::vector<std::vector<int>> brute_force_elements(const ZigzagSetDiagram& z) {
  const std::size_t nf = z.fiber_count();
  const std::size_t nc = z.cobordisms.size();
  std::vector<int> sizes(z.fiber_sizes);
  for (const auto& c : z.cobordisms) sizes.push_back(c.size);
  std::set<std::vector<int>> found;
  for (int v : sizes)
    if (v == 0) return {};
  std::vector<int> tuple(sizes.size(), 0);
  for (;;) {
    bool ok = true;
    for (std::size_t k = 0; k < nc && ok; ++k) {
      const int at = tuple[nf + k];
      ok = z.cobordisms[k].left[tuple[k]] == at && z.cobordisms[k].right[tuple[z.right_fiber(k)]] == at;
    }
    if (ok) found.insert(std::vector<int>(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(nf)));
    std::size_t i = 0;
    while (i < tuple.size() && ++tuple[i] == sizes[i]) tuple[i++] = 0;
    if (i == tuple.size()) break;
  }
  return {found.begin(), found.end()};
}

// Random wide zigzag with at most max_objects objects of at most
// max_elements elements each; empty sets are allowed.
inline ZigzagSetDiagram random_diagram(std::mt19937_64& rng, Shape shape, int max_objects = 6, int max_elements = 5) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  ZigzagSetDiagram z;
  z.shape = shape;
  // interval: 2n + 1 objects; circle: 2n objects
  const int n = shape == Shape::Interval ? pick(0, (max_objects - 1) / 2) : pick(1, max_objects / 2);
  const int fibers = shape == Shape::Interval ? n + 1 : n;
  for (int i = 0; i < fibers; ++i) z.fiber_sizes.push_back(pick(0, max_elements));
  for (int k = 0; k < n; ++k) {
    CobordismMaps c;
    const int lsize = z.fiber_sizes[k];
    const int rsize = z.fiber_sizes[shape == Shape::Circle ? (k + 1) % fibers : k + 1];
    c.size = pick(lsize + rsize > 0 ? 1 : 0, max_elements);
    for (int a = 0; a < lsize; ++a) c.left.push_back(pick(0, c.size - 1));
    for (int b = 0; b < rsize; ++b) c.right.push_back(pick(0, c.size - 1));
    z.cobordisms.push_back(std::move(c));
  }
  return z;
}

// Components of a fiber region by flood fill over face neighbours; an
// independent check on the union-find labeling.
inline int flood_components(const FiberComplex& f, bool uncovered) {
  const auto& g = f.grid;
  std::vector<std::uint8_t> seen(g.cell_count(), 0);
  auto member = [&](int c) { return uncovered ? f.uncovered(c) : f.covered_region(c); };
  int count = 0;
  std::vector<int> stack;
  for (int c = 0; c < g.cell_count(); ++c) {
    if (seen[c] || !member(c)) continue;
    ++count;
    seen[c] = 1;
    stack.push_back(c);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      const int i = g.column(v), j = g.row(v);
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (uncovered && di != 0 && dj != 0) continue;  // covered side uses 8-adjacency
          const int ni = i + di, nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= g.nx || nj >= g.ny) continue;
          const int w = g.index(ni, nj);
          if (!seen[w] && member(w)) {
            seen[w] = 1;
            stack.push_back(w);
          }
        }
    }
  }
  return count;
}

}  // namespace evasion::testing
