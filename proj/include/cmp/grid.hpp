#pragma once

#include <algorithm>
#include <cstddef>

#include "cmp/core.hpp"

namespace cmp {

/// Closed axis-aligned integer rectangle [lo.x, hi.x] x [lo.y, hi.y] with a
/// row-major dense index.
struct Rect {
  Cell lo;
  Cell hi;

  int width() const { return hi.x - lo.x + 1; }
  int height() const { return hi.y - lo.y + 1; }
  std::size_t area() const {
    return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
  }
  bool contains(Cell c) const { return c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y; }
  bool strictly_contains(Cell c) const {
    return c.x > lo.x && c.x < hi.x && c.y > lo.y && c.y < hi.y;
  }
  bool on_boundary(Cell c) const { return contains(c) && !strictly_contains(c); }

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y - lo.y) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(c.x - lo.x);
  }
  Cell cell(std::size_t i) const {
    const auto w = static_cast<std::size_t>(width());
    return {lo.x + static_cast<int>(i % w), lo.y + static_cast<int>(i / w)};
  }
  Cell clamp(Cell c) const {
    return {std::clamp(c.x, lo.x, hi.x), std::clamp(c.y, lo.y, hi.y)};
  }

  Rect expanded(int k) const { return {{lo.x - k, lo.y - k}, {hi.x + k, hi.y + k}}; }
  Rect including(Cell c) const {
    return {{std::min(lo.x, c.x), std::min(lo.y, c.y)}, {std::max(hi.x, c.x), std::max(hi.y, c.y)}};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace cmp
