#pragma once

// End-to-end pipelines: direct analysis through the zigzag of uncovered
// components, the brute-force oracle, and the closed-form count on a line.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evasion/error.hpp"
#include "evasion/limit.hpp"
#include "evasion/oracle.hpp"
#include "evasion/rasterize.hpp"
#include "evasion/scenario.hpp"
#include "evasion/timeline.hpp"
#include "evasion/witness.hpp"
#include "evasion/zigzag.hpp"

namespace evasion {

enum class Mode { Direct, Boundary, Oracle };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Direct: return "direct";
    case Mode::Boundary: return "boundary";
    case Mode::Oracle: return "oracle";
  }
  return "?";
}

struct AnalysisConfig {
  double tol = kDefaultTolerance;
  std::size_t element_cap = 10000;
  std::size_t witness_cap = 64;
  int oracle_slices = kDefaultOracleSlices;
  bool count_collar_ends = true;  // line count: collar ends are covered components
};

struct FiberDiagnostic {
  double t = 0.0;
  int pi0 = 0;
  int b1 = 0;
};

struct AnalysisReport {
  Mode mode = Mode::Direct;
  bool exists = false;
  Count limit_cardinality;
  std::vector<std::vector<int>> limit_elements;
  std::vector<WitnessPath> witnesses;
  std::vector<FiberDiagnostic> fibers;
  EventList events;
  bool truncated_elements = false;
  bool truncated_witnesses = false;
  std::vector<std::pair<int, int>> reachable;  // oracle only
};

inline constexpr const char* kLowerBoundBanner =
    "lower bound only: uncovered fibers have loops, so path components beyond the limit are not counted";

inline nlohmann::json report_to_json(const AnalysisReport& r, const GridSpec& g, int dimension) {
  using nlohmann::json;
  json doc;
  doc["mode"] = mode_name(r.mode);
  doc["exists"] = r.exists;
  doc["limit_cardinality"] = r.limit_cardinality.value;
  doc["limit_elements"] = r.limit_elements;
  auto ws = json::array();
  for (const auto& w : r.witnesses) ws.push_back(witness_to_json(w, g, dimension));
  doc["witnesses"] = std::move(ws);
  auto fibers = json::array();
  bool loops = false;
  for (const auto& f : r.fibers) {
    fibers.push_back({{"t", f.t}, {"pi0", f.pi0}, {"b1", f.b1}});
    loops = loops || f.b1 > 0;
  }
  json diag;
  diag["fibers"] = std::move(fibers);
  diag["events"] = events_to_json(r.events, g);
  if (loops) diag["banner"] = kLowerBoundBanner;
  if (r.mode == Mode::Oracle) diag["reachable"] = r.reachable;
  doc["diagnostics"] = std::move(diag);
  doc["truncated"] = {{"elements", r.truncated_elements},
                      {"witnesses", r.truncated_witnesses},
                      {"cardinality", r.limit_cardinality.saturated}};
  return doc;
}

// ---------------------------------------------------------------------------
// Direct analysis

// Everything computed on the way to a direct report, for callers that need
// the diagrams themselves.
struct DirectAnalysis {
  CoverageTimeline timeline;
  EventList events;
  SpacetimeDecomposition decomposition;
  std::vector<int> cobordism_event;
  AnalysisReport report;
};

inline DirectAnalysis run_direct(const Scenario& s, const GridSpec& g, const AnalysisConfig& cfg = {}) {
  DirectAnalysis da;
  da.timeline = CoverageTimeline(s, g);
  da.events = detect_events(da.timeline, cfg.tol);
  da.decomposition = decompose(s, da.timeline, interleave(da.events, s.time_base));
  const auto& d = da.decomposition;
  da.cobordism_event = events_per_cobordism(d.samples, da.events);
  check_retractions(d.x.diagram, da.cobordism_event, da.events);
  const InverseLimit lim(d.x.diagram);
  auto& r = da.report;
  r.mode = Mode::Direct;
  r.limit_cardinality = lim.cardinality();
  r.exists = r.limit_cardinality.positive();
  r.limit_elements = lim.elements(cfg.element_cap);
  r.truncated_elements = r.limit_cardinality.saturated || r.limit_elements.size() < r.limit_cardinality.value;
  r.events = da.events;
  for (std::size_t i = 0; i < d.fibers.size(); ++i)
    r.fibers.push_back({d.samples.s[i], d.x.diagram.fiber_sizes[i], first_betti_uncovered(d.fibers[i])});
  const std::size_t nw = std::min(cfg.witness_cap, r.limit_elements.size());
  r.truncated_witnesses = nw < r.limit_elements.size();
  if (nw > 0) {
    std::vector<std::vector<int>> chosen(r.limit_elements.begin(), r.limit_elements.begin() + static_cast<std::ptrdiff_t>(nw));
    r.witnesses = extract_witnesses(da.timeline, d.samples, d.x.fiber_labels, chosen);
    for (const auto& w : r.witnesses) verify_witness(s, g, w);
  }
  return da;
}

inline AnalysisReport analyze_direct(const Scenario& s, const GridSpec& g, const AnalysisConfig& cfg = {}) {
  return run_direct(s, g, cfg).report;
}

// Witness for one element of the limit computed by the direct pipeline.
inline WitnessPath extract_witness(const Scenario& s, const GridSpec& g, const std::vector<int>& element,
                                   const AnalysisConfig& cfg = {}) {
  AnalysisConfig quiet = cfg;
  quiet.element_cap = 0;
  quiet.witness_cap = 0;
  const DirectAnalysis da = run_direct(s, g, quiet);
  const auto& d = da.decomposition;
  const auto& z = d.x.diagram;
  if (element.size() != z.fiber_count()) throw Error("invalid element", "element needs one label per fiber");
  for (std::size_t i = 0; i < element.size(); ++i)
    if (element[i] < 0 || element[i] >= z.fiber_sizes[i]) throw Error("invalid element", "label out of range");
  for (std::size_t k = 0; k < z.cobordisms.size(); ++k)
    if (z.cobordisms[k].left[element[k]] != z.cobordisms[k].right[element[z.right_fiber(k)]])
      throw Error("invalid element", "element is not in the inverse limit");
  auto paths = extract_witnesses(da.timeline, d.samples, d.x.fiber_labels, {element});
  verify_witness(s, g, paths.front());
  return paths.front();
}

// ---------------------------------------------------------------------------
// Oracle

inline AnalysisReport oracle_reachability(const Scenario& s, const GridSpec& g, const AnalysisConfig& cfg = {}) {
  const OracleResult o = oracle_reach(s, g, cfg.oracle_slices);
  AnalysisReport r;
  r.mode = Mode::Oracle;
  r.exists = o.exists;
  r.limit_cardinality = {o.count, false};
  r.reachable = o.reachable;
  const FiberComplex f0 = rasterize_fiber(s, kTimeStart, g);
  const FiberComplex f1 = rasterize_fiber(s, kTimeEnd, g);
  r.fibers.push_back({kTimeStart, o.start_components, first_betti_uncovered(f0)});
  r.fibers.push_back({kTimeEnd, o.end_components, first_betti_uncovered(f1)});
  return r;
}

// ---------------------------------------------------------------------------
// Closed form on a line

struct LineCount {
  int covered_components = 0;  // |pi0(C_0)| under the chosen convention
  int type_n_c = 0;            // type N events of C -> I
  long long value = 0;
};

// |pi0(C_0)| - 1 - #(type N critical points of C -> I). Without the collar
// convention the two end segments of the fence are not counted.
inline LineCount d1_count(const Scenario& s, const GridSpec& g, const AnalysisConfig& cfg = {}) {
  if (s.dimension != 1) throw Error("unsupported dimension", "the closed-form count needs dimension 1");
  const FiberComplex f0 = rasterize_fiber(s, kTimeStart, g);
  const Labeling c0 = components(f0, Region::Covered);
  LineCount out;
  out.covered_components = c0.count;
  if (!cfg.count_collar_ends) {
    std::vector<std::uint8_t> collar(c0.count, 0);
    for (int c = 0; c < g.cell_count(); ++c)
      if (f0.cells[c] == CellState::Collar) collar[c0.label[c]] = 1;
    for (auto v : collar) out.covered_components -= v;
  }
  for (const auto& e : detect_events(s, g, cfg.tol)) out.type_n_c += to_c_convention(e.type_x) == EventType::N;
  out.value = static_cast<long long>(out.covered_components) - 1 - out.type_n_c;
  if (out.value < 0)
    throw AnalysisError("negative count", "|pi0(C_0)| - 1 - #N = " + std::to_string(out.value) +
                                              "; the scenario violates the no-extremum assumption");
  return out;
}

}  // namespace evasion
