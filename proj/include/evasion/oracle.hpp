#pragma once

// Brute-force reachability over uniform time slices. Independent of event
// detection and of the coverage history: every slice is rasterized directly
// and an intruder may move freely inside a slice component, or stay in a
// cell that is uncovered in two consecutive slices.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "evasion/error.hpp"
#include "evasion/parallel.hpp"
#include "evasion/rasterize.hpp"
#include "evasion/scenario.hpp"

namespace evasion {

inline constexpr int kDefaultOracleSlices = 2048;

struct OracleResult {
  int start_components = 0;  // uncovered components at t = 0
  int end_components = 0;    // uncovered components at t = 1
  std::vector<std::pair<int, int>> reachable;  // (start, end) pairs, sorted
  bool exists = false;
  // Interval: reachable pairs. Circle: start components that return to
  // themselves after one period.
  std::uint64_t count = 0;
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline void or_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  for (std::size_t w = 0; w < words; ++w) dst[w] |= src[w];
}

}  // namespace detail

inline OracleResult oracle_reach(const Scenario& s, const GridSpec& g, int slices = kDefaultOracleSlices) {
  if (slices < 1) throw Error("invalid grid", "oracle needs at least one time step");
  const int n = g.cell_count();
  OracleResult out;
  FiberComplex prev = rasterize_fiber(s, kTimeStart, g);
  Labeling prev_lab = components(prev, Region::Uncovered);
  out.start_components = prev_lab.count;
  const std::size_t words = (static_cast<std::size_t>(prev_lab.count) + 63) / 64;
  detail::Bits cell_reach(static_cast<std::size_t>(n) * words, 0);
  for (int c = 0; c < n; ++c)
    if (prev_lab.label[c] >= 0) cell_reach[c * words + prev_lab.label[c] / 64] |= std::uint64_t{1} << (prev_lab.label[c] % 64);

  constexpr int kBatch = 32;
  std::vector<FiberComplex> batch;
  std::vector<Labeling> labels;
  Labeling lab;
  for (int first = 1; first <= slices; first += kBatch) {
    const int count = std::min(kBatch, slices - first + 1);
    batch.assign(count, {});
    labels.assign(count, {});
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t m) {
      const double t = static_cast<double>(first + static_cast<int>(m)) / slices;
      batch[m] = rasterize_fiber(s, t, g);
      labels[m] = components(batch[m], Region::Uncovered);
    });
    for (int m = 0; m < count; ++m) {
      const FiberComplex& f = batch[m];
      lab = std::move(labels[m]);
      detail::Bits comp_reach(static_cast<std::size_t>(lab.count) * words, 0);
      for (int c = 0; c < n; ++c)
        if (lab.label[c] >= 0 && prev.uncovered(c))
          detail::or_into(&comp_reach[lab.label[c] * words], &cell_reach[c * words], words);
      for (int c = 0; c < n; ++c) {
        auto* dst = &cell_reach[c * words];
        if (lab.label[c] < 0) {
          std::fill(dst, dst + words, 0);
        } else {
          std::copy_n(&comp_reach[lab.label[c] * words], words, dst);
        }
      }
      prev = f;
      prev_lab = lab;
    }
  }

  out.end_components = prev_lab.count;
  std::vector<detail::Bits> end_reach(prev_lab.count, detail::Bits(words, 0));
  for (int c = 0; c < n; ++c)
    if (prev_lab.label[c] >= 0) detail::or_into(end_reach[prev_lab.label[c]].data(), &cell_reach[c * words], words);
  for (int a = 0; a < out.start_components; ++a)
    for (int b = 0; b < out.end_components; ++b)
      if ((end_reach[b][a / 64] >> (a % 64)) & 1u) out.reachable.emplace_back(a, b);
  if (s.time_base == TimeBase::Circle) {
    // The t = 1 slice is the t = 0 slice, labelled identically.
    for (const auto& [a, b] : out.reachable) out.count += a == b;
  } else {
    out.count = out.reachable.size();
  }
  out.exists = out.count > 0;
  return out;
}

}  // namespace evasion
