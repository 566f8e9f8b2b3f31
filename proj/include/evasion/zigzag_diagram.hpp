#pragma once

#include <string>
#include <vector>

#include "evasion/error.hpp"

namespace evasion {

enum class Shape { Interval, Circle };

// One cobordism object with the two inward maps from its neighbouring
// fibers: left is indexed by labels of fiber k, right by labels of the
// next fiber (fiber 0 again for the closing cobordism of a circle).
struct CobordismMaps {
  int size = 0;
  std::vector<int> left;
  std::vector<int> right;
  friend bool operator==(const CobordismMaps&, const CobordismMaps&) = default;
};

// Wide zigzag of finite sets F_0 -> K_0 <- F_1 -> ... On an interval there
// are n + 1 fibers and n cobordisms; on a circle n fibers and n cobordisms,
// the last cobordism closing back onto F_0.
struct ZigzagSetDiagram {
  Shape shape = Shape::Interval;
  std::vector<int> fiber_sizes;
  std::vector<CobordismMaps> cobordisms;

  std::size_t fiber_count() const { return fiber_sizes.size(); }
  std::size_t right_fiber(std::size_t k) const {
    return shape == Shape::Circle ? (k + 1) % fiber_sizes.size() : k + 1;
  }

  void validate() const {
    const std::size_t f = fiber_sizes.size();
    if (f == 0) throw Error("invalid diagram", "no fibers");
    if (shape == Shape::Interval && cobordisms.size() + 1 != f)
      throw Error("invalid diagram", "an interval diagram needs one fewer cobordism than fibers");
    if (shape == Shape::Circle && cobordisms.size() != f)
      throw Error("invalid diagram", "a circle diagram needs as many cobordisms as fibers");
    for (std::size_t k = 0; k < cobordisms.size(); ++k) {
      const auto& c = cobordisms[k];
      auto check = [&](const std::vector<int>& m, std::size_t fiber, const char* side) {
        if (m.size() != static_cast<std::size_t>(fiber_sizes[fiber]))
          throw Error("invalid diagram", std::string(side) + " map of cobordism " + std::to_string(k) + " is not total");
        for (int v : m)
          if (v < 0 || v >= c.size)
            throw Error("invalid diagram", std::string(side) + " map of cobordism " + std::to_string(k) + " out of range");
      };
      check(c.left, k, "left");
      check(c.right, right_fiber(k), "right");
    }
  }

  friend bool operator==(const ZigzagSetDiagram&, const ZigzagSetDiagram&) = default;
};

}  // namespace evasion
