#pragma once

// Inverse limits of zigzag diagrams of finite sets, and the partition form of
// split subalgebras of k-valued functions on finite sets (H^0 with cup
// product) together with their k-algebra duals.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "evasion/error.hpp"
#include "evasion/union_find.hpp"
#include "evasion/zigzag_diagram.hpp"

namespace evasion {

// Non-negative count that saturates at the uint64 maximum instead of wrapping.
struct Count {
  std::uint64_t value = 0;
  bool saturated = false;

  static constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

  friend Count operator+(Count a, Count b) {
    if (a.saturated || b.saturated || a.value > kMax - b.value) return {kMax, true};
    return {a.value + b.value, false};
  }
  friend Count operator*(Count a, Count b) {
    if (a.value == 0 || b.value == 0) return {0, false};
    if (a.saturated || b.saturated || a.value > kMax / b.value) return {kMax, true};
    return {a.value * b.value, false};
  }
  bool positive() const { return value > 0; }
  friend bool operator==(const Count&, const Count&) = default;
};

// Elements are tuples (one label per fiber) whose images agree in every
// cobordism. Cardinality comes from transfer-matrix products (the trace for a
// circle); enumeration is lexicographic and stops at a caller-given cap.
class InverseLimit {
 public:
  explicit InverseLimit(ZigzagSetDiagram diagram) : z_(std::move(diagram)) {
    z_.validate();
    const std::size_t f = z_.fiber_count();
    relation_.resize(z_.cobordisms.size());
    for (std::size_t k = 0; k < z_.cobordisms.size(); ++k) {
      const auto& c = z_.cobordisms[k];
      const int rows = z_.fiber_sizes[k];
      const int cols = z_.fiber_sizes[z_.right_fiber(k)];
      auto& r = relation_[k];
      r.assign(static_cast<std::size_t>(rows) * cols, 0);
      for (int a = 0; a < rows; ++a)
        for (int b = 0; b < cols; ++b) r[a * cols + b] = c.left[a] == c.right[b];
    }
    if (z_.shape == Shape::Interval) {
      suffix_.resize(f);
      suffix_[f - 1].assign(z_.fiber_sizes[f - 1], Count{1, false});
      for (std::size_t k = f - 1; k-- > 0;) suffix_[k] = step_back(k, suffix_[k + 1]);
      for (const auto& v : suffix_[0]) cardinality_ = cardinality_ + v;
    } else {
      for (int a0 = 0; a0 < z_.fiber_sizes[0]; ++a0) cardinality_ = cardinality_ + closed_suffix(a0)[0][a0];
    }
  }

  const ZigzagSetDiagram& diagram() const { return z_; }
  Count cardinality() const { return cardinality_; }
  bool empty() const { return !cardinality_.positive(); }

  bool related(std::size_t k, int a, int b) const {
    const int cols = z_.fiber_sizes[z_.right_fiber(k)];
    return relation_[k][a * cols + b] != 0;
  }

  std::vector<std::vector<int>> elements(std::size_t cap) const {
    std::vector<std::vector<int>> out;
    if (cap == 0 || empty()) return out;
    std::vector<int> prefix;
    if (z_.shape == Shape::Interval) {
      enumerate(0, prefix, suffix_, cap, out);
    } else {
      for (int a0 = 0; a0 < z_.fiber_sizes[0] && out.size() < cap; ++a0) {
        auto suffix = closed_suffix(a0);
        if (!suffix[0][a0].positive()) continue;
        prefix.assign(1, a0);
        enumerate(1, prefix, suffix, cap, out);
      }
    }
    return out;
  }

 private:
  // v over fiber right_fiber(k) -> counts over fiber k.
  std::vector<Count> step_back(std::size_t k, const std::vector<Count>& next) const {
    const int rows = z_.fiber_sizes[k];
    const int cols = static_cast<int>(next.size());
    std::vector<Count> out(rows);
    for (int a = 0; a < rows; ++a)
      for (int b = 0; b < cols; ++b)
        if (relation_[k][a * cols + b]) out[a] = out[a] + next[b];
    return out;
  }

  // suffix[k][x] = number of ways to go from x at fiber k around to a0 at
  // fiber 0 (index f stands for the return to fiber 0).
  std::vector<std::vector<Count>> closed_suffix(int a0) const {
    const std::size_t f = z_.fiber_count();
    std::vector<std::vector<Count>> suffix(f + 1);
    suffix[f].assign(z_.fiber_sizes[0], Count{});
    suffix[f][a0] = Count{1, false};
    for (std::size_t k = f; k-- > 0;) suffix[k] = step_back(k, suffix[k + 1]);
    return suffix;
  }

  void enumerate(std::size_t k, std::vector<int>& prefix, const std::vector<std::vector<Count>>& suffix, std::size_t cap,
                 std::vector<std::vector<int>>& out) const {
    if (out.size() >= cap) return;
    const std::size_t f = z_.fiber_count();
    if (k == f) {
      out.push_back(prefix);
      return;
    }
    for (int a = 0; a < z_.fiber_sizes[k] && out.size() < cap; ++a) {
      if (!suffix[k][a].positive()) continue;
      if (k > 0 && !related(k - 1, prefix.back(), a)) continue;
      prefix.push_back(a);
      enumerate(k + 1, prefix, suffix, cap, out);
      prefix.pop_back();
    }
  }

  ZigzagSetDiagram z_;
  std::vector<std::vector<std::uint8_t>> relation_;
  std::vector<std::vector<Count>> suffix_;
  Count cardinality_;
};

inline InverseLimit inverse_limit(const ZigzagSetDiagram& z) { return InverseLimit(z); }

// ---------------------------------------------------------------------------
// Partition algebras

// A subalgebra of k-valued functions on {0..n-1} containing the constants,
// stored as the coarsest partition on which all of its functions are
// constant. Blocks are numbered by their least element.
class PartitionAlgebra {
 public:
  PartitionAlgebra() = default;

  // The full function algebra: every element its own block.
  static PartitionAlgebra discrete(int n) {
    PartitionAlgebra p;
    p.block_of_.resize(n);
    for (int i = 0; i < n; ++i) p.block_of_[i] = i;
    p.blocks_ = n;
    return p;
  }

  // Constants only.
  static PartitionAlgebra unit(int n) {
    PartitionAlgebra p;
    p.block_of_.assign(n, 0);
    p.blocks_ = n > 0 ? 1 : 0;
    return p;
  }

  // From any block assignment; ids are renumbered canonically.
  static PartitionAlgebra from_assignment(const std::vector<int>& ids) {
    PartitionAlgebra p;
    std::map<int, int> renumber;
    p.block_of_.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto [it, fresh] = renumber.try_emplace(ids[i], p.blocks_);
      if (fresh) ++p.blocks_;
      p.block_of_[i] = it->second;
    }
    return p;
  }

  static PartitionAlgebra from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
    std::vector<int> ids(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw Error("invalid partition", "empty block");
      for (int x : blocks[b]) {
        if (x < 0 || x >= n) throw Error("invalid partition", "element " + std::to_string(x) + " outside ground set");
        if (ids[x] >= 0) throw Error("invalid partition", "element " + std::to_string(x) + " in two blocks");
        ids[x] = static_cast<int>(b);
      }
    }
    for (int x = 0; x < n; ++x)
      if (ids[x] < 0) throw Error("invalid partition", "element " + std::to_string(x) + " in no block");
    return from_assignment(ids);
  }

  int ground_size() const { return static_cast<int>(block_of_.size()); }
  int block_count() const { return blocks_; }
  int block_of(int x) const { return block_of_[x]; }
  const std::vector<int>& assignment() const { return block_of_; }

  std::vector<std::vector<int>> blocks() const {
    std::vector<std::vector<int>> out(blocks_);
    for (int x = 0; x < ground_size(); ++x) out[block_of_[x]].push_back(x);
    return out;
  }

  friend bool operator==(const PartitionAlgebra&, const PartitionAlgebra&) = default;

 private:
  std::vector<int> block_of_;
  int blocks_ = 0;
};

// Coarsest partition on which every functional (and the unit) is constant:
// x ~ y iff v(x) = v(y) for all v.
inline PartitionAlgebra partition_from_functionals(int ground_size, const std::vector<std::vector<long long>>& functionals) {
  for (const auto& v : functionals)
    if (static_cast<int>(v.size()) != ground_size)
      throw Error("functional domain mismatch",
                  "functional of size " + std::to_string(v.size()) + " on a ground set of size " + std::to_string(ground_size));
  std::map<std::vector<long long>, int> signature_id;
  std::vector<int> ids(ground_size);
  for (int x = 0; x < ground_size; ++x) {
    std::vector<long long> sig;
    sig.reserve(functionals.size());
    for (const auto& v : functionals) sig.push_back(v[x]);
    ids[x] = signature_id.try_emplace(std::move(sig), static_cast<int>(signature_id.size())).first->second;
  }
  return PartitionAlgebra::from_assignment(ids);
}

// Hom_{k-alg}(A, k): one evaluation morphism per block.
inline std::vector<std::vector<int>> dualize(const PartitionAlgebra& a) { return a.blocks(); }

// Partition of the subalgebra {u on S : u o g is constant on every block of P}:
// merge g(b) for each block b of P; points outside im(g) stay singletons.
inline PartitionAlgebra pullback_partition(const std::vector<int>& g, int target_size, const PartitionAlgebra& p) {
  if (static_cast<int>(g.size()) != p.ground_size())
    throw Error("invalid map", "map domain does not match the partition's ground set");
  UnionFind uf(target_size);
  std::vector<int> first_image(p.block_count(), -1);
  for (int x = 0; x < p.ground_size(); ++x) {
    const int y = g[x];
    if (y < 0 || y >= target_size) throw Error("invalid map", "map value " + std::to_string(y) + " out of range");
    int& first = first_image[p.block_of(x)];
    if (first < 0) {
      first = y;
    } else {
      uf.unite(static_cast<std::uint32_t>(first), static_cast<std::uint32_t>(y));
    }
  }
  std::vector<int> ids(target_size);
  for (int y = 0; y < target_size; ++y) ids[y] = static_cast<int>(uf.find(static_cast<std::uint32_t>(y)));
  return PartitionAlgebra::from_assignment(ids);
}

// Zigzag of partition algebras; the ground-set maps (component inclusions)
// induce the restriction maps between the algebras.
struct AlgebraCobordism {
  PartitionAlgebra algebra;
  std::vector<int> left;   // ground of fiber k -> ground of this cobordism
  std::vector<int> right;  // ground of the next fiber -> ground of this cobordism
};

struct ZigzagAlgebraDiagram {
  Shape shape = Shape::Interval;
  std::vector<PartitionAlgebra> fibers;
  std::vector<AlgebraCobordism> cobordisms;
};

// Dual zigzag of sets: blocks of every object, with a fiber block sent to the
// cobordism block containing its image. Throws "incompatible diagram" when an
// image meets two cobordism blocks.
inline ZigzagSetDiagram dual_set_diagram(const ZigzagAlgebraDiagram& za) {
  ZigzagSetDiagram z;
  z.shape = za.shape;
  for (const auto& f : za.fibers) z.fiber_sizes.push_back(f.block_count());
  const std::size_t nf = za.fibers.size();
  for (std::size_t k = 0; k < za.cobordisms.size(); ++k) {
    const auto& cob = za.cobordisms[k];
    const std::size_t rk = za.shape == Shape::Circle ? (k + 1) % nf : k + 1;
    if (rk >= nf) throw Error("invalid diagram", "cobordism " + std::to_string(k) + " has no right fiber");
    auto induce = [&](const PartitionAlgebra& fiber, const std::vector<int>& g, const char* side) {
      if (static_cast<int>(g.size()) != fiber.ground_size())
        throw Error("invalid diagram", std::string(side) + " map of cobordism " + std::to_string(k) + " is not total");
      std::vector<int> out(fiber.block_count(), -1);
      for (int x = 0; x < fiber.ground_size(); ++x) {
        if (g[x] < 0 || g[x] >= cob.algebra.ground_size())
          throw Error("invalid diagram", std::string(side) + " map of cobordism " + std::to_string(k) + " out of range");
        const int target = cob.algebra.block_of(g[x]);
        int& slot = out[fiber.block_of(x)];
        if (slot >= 0 && slot != target)
          throw AnalysisError("incompatible diagram", "a " + std::string(side) + " fiber block of cobordism " +
                                                          std::to_string(k) + " meets two cobordism blocks");
        slot = target;
      }
      return out;
    };
    CobordismMaps maps;
    maps.size = cob.algebra.block_count();
    maps.left = induce(za.fibers[k], cob.left, "left");
    maps.right = induce(za.fibers[rk], cob.right, "right");
    z.cobordisms.push_back(std::move(maps));
  }
  return z;
}

inline InverseLimit limit_of_algebras(const ZigzagAlgebraDiagram& za) { return InverseLimit(dual_set_diagram(za)); }

}  // namespace evasion
