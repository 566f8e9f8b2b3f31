#include <catch_amalgamated.hpp>

#include "evasion/planar_homology.hpp"
#include "evasion/scenario.hpp"
#include "support.hpp"

using namespace evasion;

namespace {

Scenario static_scenario(std::vector<Point> sensors, double radius) {
  Scenario s;
  s.domain = {{0.0, 0.0}, 1.0};
  s.fence_width = 0.1;
  s.sensing_radius = radius;
  for (Point p : sensors) s.tracks.push_back({{{0.0, p}, {1.0, p}}});
  return s;
}

// X component of every block, checked to be a bijection.
bool blocks_biject(const FiberComplex& f) {
  const Labeling x = components(f, Region::Uncovered);
  const Labeling b = components(f, Region::Boundary);
  const PartitionAlgebra image = alexander_image(f, b);
  std::vector<int> phi(image.block_count(), -1);
  for (std::size_t node = 0; node < b.label.size(); ++node) {
    if (b.label[node] < 0) continue;
    const int xc = x.label[node_cell(static_cast<int>(node), Region::Boundary)];
    int& slot = phi[image.block_of(b.label[node])];
    if (slot >= 0 && slot != xc) return false;
    slot = xc;
  }
  std::vector<int> hit(x.count, 0);
  for (int v : phi) {
    if (v < 0 || hit[v]++) return false;
  }
  return static_cast<int>(phi.size()) == x.count;
}

}  // namespace

TEST_CASE("winding numbers of a lattice square") {
  EdgeCycle square;
  square.vertices = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  square.min_x = square.min_y = 0;
  square.max_x = square.max_y = 2;
  CHECK(square.doubled_area() == 8);
  CHECK(winding(square, 0.5, 0.5) == 1);
  CHECK(winding(square, 1.5, 1.5) == 1);
  CHECK(winding(square, 2.5, 0.5) == 0);
  CHECK(winding(square, -0.5, 0.5) == 0);
  CHECK_THROWS_AS(winding(square, 1.0, 0.0), Error);
  std::reverse(square.vertices.begin(), square.vertices.end());
  CHECK(winding(square, 0.5, 0.5) == -1);
}

TEST_CASE("holes of the covered region are the bounded uncovered components") {
  const Scenario s = static_scenario({{-0.4, 0.0}, {0.4, 0.0}}, 0.2);
  const FiberComplex f = rasterize_fiber(s, 0.0, make_grid_cells(s, 64, 8));
  const HoleBasis basis = holes(f.grid, covered_bitmap(f));
  // The interior of the fence is one hole of the covered region.
  CHECK(basis.holes.size() == 1);
  CHECK(components(f, Region::Uncovered).count == 1);
  CHECK(components(f, Region::Boundary).count == 3);  // fence loop and two island loops
  const PartitionAlgebra image = alexander_image(f, components(f, Region::Boundary));
  CHECK(image.block_count() == 1);
}

TEST_CASE("a wall across the domain gives two blocks") {
  std::vector<Point> wall;
  for (int k = -5; k <= 5; ++k) wall.push_back({0.0, k * 0.19});
  const Scenario s = static_scenario(wall, 0.12);
  const FiberComplex f = rasterize_fiber(s, 0.0, make_grid_cells(s, 64, 8));
  const Labeling b = components(f, Region::Boundary);
  CHECK(components(f, Region::Uncovered).count == 2);
  CHECK(alexander_image(f, b).block_count() == 2);
  CHECK(blocks_biject(f));
}

TEST_CASE("blocks biject with uncovered components on random fibers") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Scenario s = random_scenario(seed);
    for (double t : {0.0, 0.5, 1.0}) {
      INFO("seed " << seed << " t " << t);
      CHECK(blocks_biject(rasterize_fiber(s, t, make_grid_cells(s, 96, 8))));
    }
  }
}

TEST_CASE("the sign convention does not change the partition") {
  const Scenario s = random_scenario(4);
  const FiberComplex f = rasterize_fiber(s, 0.3, make_grid_cells(s, 64, 8));
  const Labeling b = components(f, Region::Boundary);
  CHECK(alexander_image(f, b, 1).blocks() == alexander_image(f, b, -1).blocks());
}

TEST_CASE("line fibers are rejected") {
  Scenario s = builtin_scenario("empty");
  s.dimension = 1;
  s.domain.center.y = 0.0;
  const FiberComplex f = rasterize_fiber(s, 0.0, make_grid_cells(s, 32, 8));
  CHECK_THROWS_AS(alexander_image(f, components(f, Region::Boundary)), Error);
}
