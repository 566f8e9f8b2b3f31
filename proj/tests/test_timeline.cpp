#include <catch_amalgamated.hpp>

#include <random>

#include "evasion/timeline.hpp"
#include "evasion/zigzag.hpp"
#include "support.hpp"

using namespace evasion;

TEST_CASE("exact fibers equal direct rasterization") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> when(0.0, 1.0);
  RandomOptions loop;
  loop.time_base = TimeBase::Circle;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    for (const auto& opt : {RandomOptions{}, loop}) {
      const Scenario s = random_scenario(seed, opt);
      const GridSpec g = make_grid_cells(s, 48, 8);
      const CoverageTimeline tl(s, g);
      for (int k = 0; k < 10; ++k) {
        const double t = k == 0 ? 0.0 : when(rng);
        const FiberComplex exact = fiber_at(tl, t);
        const FiberComplex direct = rasterize_fiber(s, t, g);
        REQUIRE(exact.cells == direct.cells);
        REQUIRE(exact.boundary == direct.boundary);
      }
    }
  }
}

TEST_CASE("flips are sorted and change the cell state") {
  const Scenario s = random_scenario(3);
  const GridSpec g = make_grid_cells(s, 48, 8);
  const CoverageTimeline tl(s, g);
  const auto flips = tl.flips();
  REQUIRE_FALSE(flips.empty());
  for (std::size_t k = 1; k < flips.size(); ++k) CHECK(flips[k - 1].t <= flips[k].t);
  for (std::size_t k = 0; k < flips.size(); k += 17) {
    const Flip& f = flips[k];
    const double eps = 1e-9;
    CHECK(point_uncovered(s, f.t + eps, g.center(f.cell)) == f.opens);
    CHECK(point_uncovered(s, f.t - eps, g.center(f.cell)) != f.opens);
  }
}

TEST_CASE("uncovered pieces complement covered pieces") {
  const Scenario s = random_scenario(5);
  const GridSpec g = make_grid_cells(s, 32, 8);
  const CoverageTimeline tl(s, g);
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!tl.interior(c)) continue;
    double total = 0.0;
    for (const auto& iv : tl.uncovered_pieces(c, 0.2, 0.7)) total += iv.hi - iv.lo;
    for (const auto& iv : tl.covered_pieces(c, 0.2, 0.7)) total += iv.hi - iv.lo;
    REQUIRE(total == Catch::Approx(0.5));
  }
}

TEST_CASE("spacetime components of an event-free range match fiber components") {
  const Scenario s = builtin_scenario("empty");
  const GridSpec g = make_grid_cells(s, 32, 8);
  const CoverageTimeline tl(s, g);
  CHECK(spacetime_components(tl, 0.0, 1.0, Region::Uncovered).labels.count == 1);
  CHECK(spacetime_components(tl, 0.0, 1.0, Region::Boundary).labels.count == 1);
}

namespace {

FiberComplex window(unsigned ring, bool centre) {
  GridSpec g;
  g.nx = g.ny = 5;
  g.cell_size = 1.0;
  FiberComplex f;
  f.grid = g;
  f.cells.assign(25, CellState::Covered);
  static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static constexpr int dy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  for (int k = 0; k < 8; ++k)
    if (ring >> k & 1u) f.cells[g.index(2 + dx[k], 2 + dy[k])] = CellState::Uncovered;
  if (centre) f.cells[g.index(2, 2)] = CellState::Uncovered;
  evasion::detail::mark_boundary(f);
  return f;
}

}  // namespace

TEST_CASE("simple-point table agrees with flipping inside a padded window") {
  for (unsigned ring = 0; ring < 256; ++ring) {
    const FiberComplex without = window(ring, false);
    const FiberComplex with = window(ring, true);
    const bool preserved = testing::flood_components(without, true) == testing::flood_components(with, true) &&
                           testing::flood_components(without, false) == testing::flood_components(with, false);
    INFO("ring " << ring);
    CHECK(evasion::detail::is_simple(with, with.grid.index(2, 2)) == preserved);
  }
}
