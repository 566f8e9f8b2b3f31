#pragma once

// SVG frames of rasterized fibers with boundary edges and witness positions.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "evasion/error.hpp"
#include "evasion/rasterize.hpp"
#include "evasion/scenario.hpp"
#include "evasion/witness.hpp"

namespace evasion {

inline constexpr int kPixelsPerCell = 4;

namespace detail {

inline const char* fill_of(CellState c) {
  switch (c) {
    case CellState::Outside: return "#f2f2f2";
    case CellState::Collar: return "#7a7a7a";
    case CellState::Covered: return "#a8a8a8";
    case CellState::Uncovered: return "#ffffff";
  }
  return "#000000";
}

inline const char* witness_colour(std::size_t k) {
  static constexpr const char* palette[] = {"#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                            "#17becf", "#bcbd22", "#8c564b", "#e377c2"};
  return palette[k % (sizeof(palette) / sizeof(palette[0]))];
}

// Cell the witness occupies at time t, or -1 when t is outside its span.
inline int witness_cell_at(const WitnessPath& w, double t, TimeBase base) {
  if (w.samples.empty()) return -1;
  const double start = w.samples.front().t;
  if (base == TimeBase::Circle) t = start + wrap_time(t - start);
  if (t < start || t > w.samples.back().t) return -1;
  int cell = w.samples.front().cell;
  for (const auto& s : w.samples) {
    if (s.t > t) break;
    cell = s.cell;
  }
  return cell;
}

inline std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

// Grid rows are drawn bottom-up so the picture has y pointing up.
inline std::string render_svg(const FiberComplex& f, const std::vector<WitnessPath>& witnesses, TimeBase base) {
  const auto& g = f.grid;
  const int px = kPixelsPerCell;
  const int width = g.nx * px;
  const int height = g.ny * px;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" shape-rendering=\"crispEdges\">\n";
  out << "<title>t = " << detail::number(f.time) << "</title>\n";
  for (int j = 0; j < g.ny; ++j) {
    const int y = (g.ny - 1 - j) * px;
    for (int i = 0; i < g.nx;) {
      const CellState state = f.cells[g.index(i, j)];
      int run = 1;
      while (i + run < g.nx && f.cells[g.index(i + run, j)] == state) ++run;
      out << "<rect x=\"" << i * px << "\" y=\"" << y << "\" width=\"" << run * px << "\" height=\"" << px
          << "\" fill=\"" << detail::fill_of(state) << "\"/>\n";
      i += run;
    }
  }
  // Boundary edges: sides of uncovered cells facing a non-uncovered cell.
  out << "<g stroke=\"#d62728\" stroke-width=\"1\">\n";
  auto open = [&](int c) { return f.uncovered(c); };
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!f.uncovered(c)) continue;
    const int x0 = g.column(c) * px;
    const int y0 = (g.ny - 1 - g.row(c)) * px;
    for (int side = 0; side < 4; ++side) {
      if (!is_interface_edge(g, c, side, open)) continue;
      static constexpr int ax[4] = {0, 1, 1, 0}, ay[4] = {1, 1, 0, 0};
      static constexpr int bx[4] = {1, 1, 0, 0}, by[4] = {1, 0, 0, 1};
      out << "<line x1=\"" << x0 + ax[side] * px << "\" y1=\"" << y0 + ay[side] * px << "\" x2=\"" << x0 + bx[side] * px
          << "\" y2=\"" << y0 + by[side] * px << "\"/>\n";
    }
  }
  out << "</g>\n";
  for (std::size_t k = 0; k < witnesses.size(); ++k) {
    const int cell = detail::witness_cell_at(witnesses[k], f.time, base);
    if (cell < 0) continue;
    out << "<circle cx=\"" << g.column(cell) * px + px / 2.0 << "\" cy=\"" << (g.ny - 1 - g.row(cell)) * px + px / 2.0
        << "\" r=\"" << px << "\" fill=\"" << detail::witness_colour(k) << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

// Writes frame_NNN.svg per time into dir and returns the paths.
inline std::vector<std::string> render(const Scenario& s, const GridSpec& g, const std::vector<double>& times,
                                       const std::vector<WitnessPath>& witnesses, const std::string& dir) {
  std::vector<std::string> paths;
  if (times.empty()) return paths;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const std::string svg = render_svg(rasterize_fiber(s, times[k], g), witnesses, s.time_base);
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03zu.svg", k);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << svg)) throw Error("unwritable output", "cannot write " + path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace evasion
