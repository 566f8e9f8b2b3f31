#pragma once

// Boundary-only reconstruction. From the zigzag of boundary components, the
// planar image partition of every fiber, and the event types with respect to
// the covered region, rebuild the zigzag of partition algebras whose dual is
// the zigzag of uncovered components.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evasion/analysis.hpp"
#include "evasion/error.hpp"
#include "evasion/limit.hpp"
#include "evasion/planar_homology.hpp"
#include "evasion/zigzag.hpp"

namespace evasion {

struct BoundaryFiber {
  double t = 0.0;
  int b_count = 0;
  PartitionAlgebra image;  // on pi0(B) at this fiber
};

struct BoundaryCobordism {
  int b_count = 0;
  std::vector<int> left;   // fiber labels -> cobordism labels
  std::vector<int> right;
  std::optional<EventType> type_c;  // empty for an event-free cobordism
};

struct BoundaryData {
  Shape shape = Shape::Interval;
  std::vector<BoundaryFiber> fibers;
  std::vector<BoundaryCobordism> cobordisms;
};

inline BoundaryData extract_boundary_data(const DirectAnalysis& da) {
  const auto& d = da.decomposition;
  if (!d.fibers.empty() && d.fibers.front().grid.ny == 1)
    throw Error("unsupported dimension", "boundary data needs a two-dimensional scenario");
  BoundaryData bd;
  bd.shape = d.b.diagram.shape;
  for (std::size_t i = 0; i < d.fibers.size(); ++i)
    bd.fibers.push_back({d.samples.s[i], d.b.diagram.fiber_sizes[i], alexander_image(d.fibers[i], d.b.fiber_labels[i])});
  for (std::size_t k = 0; k < d.b.diagram.cobordisms.size(); ++k) {
    const auto& m = d.b.diagram.cobordisms[k];
    BoundaryCobordism c{m.size, m.left, m.right, std::nullopt};
    if (da.cobordism_event[k] >= 0) c.type_c = to_c_convention(da.events[da.cobordism_event[k]].type_x);
    bd.cobordisms.push_back(std::move(c));
  }
  return bd;
}

inline BoundaryData extract_boundary_data(const Scenario& s, const GridSpec& g, const AnalysisConfig& cfg = {}) {
  if (s.dimension != 2) throw Error("unsupported dimension", "boundary data needs a two-dimensional scenario");
  AnalysisConfig quiet = cfg;
  quiet.element_cap = 0;
  quiet.witness_cap = 0;
  return extract_boundary_data(run_direct(s, g, quiet));
}

inline void validate(const BoundaryData& bd) {
  ZigzagSetDiagram z;
  z.shape = bd.shape;
  for (std::size_t i = 0; i < bd.fibers.size(); ++i) {
    if (bd.fibers[i].image.ground_size() != bd.fibers[i].b_count)
      throw Error("invalid boundary data", "fiber " + std::to_string(i) + " partition does not cover its components");
    z.fiber_sizes.push_back(bd.fibers[i].b_count);
  }
  for (const auto& c : bd.cobordisms) z.cobordisms.push_back({c.b_count, c.left, c.right});
  z.validate();
}

// Side whose inclusion is a homotopy equivalence: type N for C is type D for
// the uncovered region, which retracts onto the earlier fiber.
inline Side boundary_retract_side(const BoundaryCobordism& c) {
  return c.type_c ? retract_side(to_c_convention(*c.type_c)) : Side::Left;
}

inline ZigzagAlgebraDiagram reconstruct_algebras(const BoundaryData& bd) {
  validate(bd);
  ZigzagAlgebraDiagram za;
  za.shape = bd.shape;
  for (const auto& f : bd.fibers) za.fibers.push_back(f.image);
  const std::size_t nf = bd.fibers.size();
  for (std::size_t k = 0; k < bd.cobordisms.size(); ++k) {
    const auto& c = bd.cobordisms[k];
    const std::size_t rk = bd.shape == Shape::Circle ? (k + 1) % nf : k + 1;
    const bool left = boundary_retract_side(c) == Side::Left;
    AlgebraCobordism ac;
    ac.algebra = pullback_partition(left ? c.left : c.right, c.b_count, left ? bd.fibers[k].image : bd.fibers[rk].image);
    ac.left = c.left;
    ac.right = c.right;
    za.cobordisms.push_back(std::move(ac));
  }
  return za;
}

inline AnalysisReport analyze_boundary(const BoundaryData& bd, const AnalysisConfig& cfg = {}) {
  const InverseLimit lim = limit_of_algebras(reconstruct_algebras(bd));
  AnalysisReport r;
  r.mode = Mode::Boundary;
  r.limit_cardinality = lim.cardinality();
  r.exists = r.limit_cardinality.positive();
  r.limit_elements = lim.elements(cfg.element_cap);
  r.truncated_elements = r.limit_cardinality.saturated || r.limit_elements.size() < r.limit_cardinality.value;
  // In the plane every uncovered component has one outer boundary loop plus
  // one loop per hole.
  for (const auto& f : bd.fibers) r.fibers.push_back({f.t, f.image.block_count(), f.b_count - f.image.block_count()});
  return r;
}

// True when the bijections induced by boundary -> uncovered inclusion carry
// the dual of the reconstructed diagram onto the direct diagram: blocks map
// to single components, bijectively, commuting with every map.
inline bool matches_direct(const ZigzagAlgebraDiagram& za, const SpacetimeDecomposition& d) {
  const ZigzagSetDiagram dual = dual_set_diagram(za);
  const auto& zx = d.x.diagram;
  if (dual.fiber_sizes != zx.fiber_sizes || dual.cobordisms.size() != zx.cobordisms.size()) return false;
  auto induced = [](const PartitionAlgebra& p, const std::vector<int>& iota, int target, std::vector<int>& phi) {
    phi.assign(p.block_count(), -1);
    for (int x = 0; x < p.ground_size(); ++x) {
      int& slot = phi[p.block_of(x)];
      if (slot >= 0 && slot != iota[x]) return false;
      slot = iota[x];
    }
    return is_bijection(phi, target);
  };
  std::vector<std::vector<int>> phi_f(za.fibers.size());
  for (std::size_t i = 0; i < za.fibers.size(); ++i)
    if (!induced(za.fibers[i], d.fiber_iota[i], zx.fiber_sizes[i], phi_f[i])) return false;
  for (std::size_t k = 0; k < za.cobordisms.size(); ++k) {
    std::vector<int> phi_c;
    if (!induced(za.cobordisms[k].algebra, d.cobordism_iota[k], zx.cobordisms[k].size, phi_c)) return false;
    const std::size_t rk = zx.right_fiber(k);
    for (std::size_t x = 0; x < dual.cobordisms[k].left.size(); ++x)
      if (phi_c[dual.cobordisms[k].left[x]] != zx.cobordisms[k].left[phi_f[k][x]]) return false;
    for (std::size_t x = 0; x < dual.cobordisms[k].right.size(); ++x)
      if (phi_c[dual.cobordisms[k].right[x]] != zx.cobordisms[k].right[phi_f[rk][x]]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json boundary_to_json(const BoundaryData& bd) {
  using nlohmann::json;
  json fibers = json::array();
  for (const auto& f : bd.fibers) fibers.push_back({{"t", f.t}, {"b_count", f.b_count}, {"partition", dualize(f.image)}});
  json cobs = json::array();
  for (const auto& c : bd.cobordisms)
    cobs.push_back({{"b_count", c.b_count},
                    {"left", c.left},
                    {"right", c.right},
                    {"type_C", c.type_c ? json(event_type_name(*c.type_c)) : json(nullptr)}});
  return {{"shape", bd.shape == Shape::Circle ? "circle" : "interval"}, {"fibers", fibers}, {"cobordisms", cobs}};
}

inline BoundaryData boundary_from_json(const nlohmann::json& doc) {
  auto fail = [](const std::string& path, const std::string& what) {
    throw Error("invalid boundary data", path + ": " + what);
  };
  try {
    BoundaryData bd;
    const std::string shape = doc.at("shape").get<std::string>();
    if (shape != "interval" && shape != "circle") fail("shape", "must be interval or circle");
    bd.shape = shape == "circle" ? Shape::Circle : Shape::Interval;
    for (const auto& f : doc.at("fibers")) {
      BoundaryFiber bf;
      bf.t = f.at("t").get<double>();
      bf.b_count = f.at("b_count").get<int>();
      bf.image = PartitionAlgebra::from_blocks(bf.b_count, f.at("partition").get<std::vector<std::vector<int>>>());
      bd.fibers.push_back(std::move(bf));
    }
    for (const auto& c : doc.at("cobordisms")) {
      BoundaryCobordism bc;
      bc.b_count = c.at("b_count").get<int>();
      bc.left = c.at("left").get<std::vector<int>>();
      bc.right = c.at("right").get<std::vector<int>>();
      const auto& type = c.at("type_C");
      if (!type.is_null()) {
        const std::string v = type.get<std::string>();
        if (v != "N" && v != "D") fail("type_C", "must be N, D or null");
        bc.type_c = v == "N" ? EventType::N : EventType::D;
      }
      bd.cobordisms.push_back(std::move(bc));
    }
    validate(bd);
    return bd;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid boundary data", e.what());
  }
}

}  // namespace evasion
