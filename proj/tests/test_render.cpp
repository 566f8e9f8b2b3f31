#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evasion/analysis.hpp"
#include "evasion/render.hpp"

using namespace evasion;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("SVG frames are deterministic and carry witnesses") {
  const Scenario s = builtin_scenario("split");
  const GridSpec g = make_grid_cells(s, 64, 64);
  const AnalysisReport r = analyze_direct(s, g);
  const FiberComplex f = rasterize_fiber(s, 1.0, g);
  const std::string a = render_svg(f, r.witnesses, s.time_base);
  CHECK(a == render_svg(f, r.witnesses, s.time_base));
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(count(a, "<circle") == r.witnesses.size());
  CHECK(count(a, "#d62728") == 1);
  CHECK(count(render_svg(f, {}, s.time_base), "<circle") == 0);
  // Every row is covered by runs of cells.
  CHECK(count(a, "<rect") >= static_cast<std::size_t>(g.ny));
}

TEST_CASE("render writes one file per time") {
  const Scenario s = builtin_scenario("close");
  const GridSpec g = make_grid_cells(s, 32, 16);
  const auto dir = std::filesystem::temp_directory_path() / "evasion_render_test";
  std::filesystem::remove_all(dir);
  const auto paths = render(s, g, {0.0, 0.5, 1.0}, {}, dir.string());
  REQUIRE(paths.size() == 3);
  for (const auto& p : paths) {
    std::ifstream in(p);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str().find("</svg>") != std::string::npos);
  }
  CHECK(std::filesystem::path(paths[1]).filename() == "frame_001.svg");
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(render(s, g, {0.0}, {}, "/proc/evasion_no_such_dir"), Error);
}

TEST_CASE("witness positions follow the samples") {
  WitnessPath w{{{0.0, 3}, {0.4, 4}, {1.0, 4}}};
  CHECK(evasion::detail::witness_cell_at(w, 0.2, TimeBase::Interval) == 3);
  CHECK(evasion::detail::witness_cell_at(w, 0.4, TimeBase::Interval) == 4);
  WitnessPath loop{{{0.5, 1}, {1.2, 2}, {1.5, 1}}};
  CHECK(evasion::detail::witness_cell_at(loop, 0.1, TimeBase::Circle) == 1);
  CHECK(evasion::detail::witness_cell_at(loop, 0.3, TimeBase::Circle) == 2);
}
