#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "cmp/core.hpp"
#include "cmp/grid.hpp"

namespace cmp {

/// Sentinel for obstacles and sealed-off cells. Large enough to never be
/// mistaken for a real distance, small enough to add a few of them safely.
inline constexpr int kInfDistance = std::numeric_limits<int>::max() / 8;

constexpr bool is_finite(int d) { return d < kInfDistance; }

/// Box whose strict interior holds every start, target and obstacle, with
/// every one of them at depth >= b.
struct BoundingBox {
  Rect rect;
  int b = 2;

  /// Largest side length of the closed box.
  int side() const { return std::max(rect.width(), rect.height()); }
};

/// Minimal box with strict interior containment, grown by (b - 2) per side.
BoundingBox compute_bounding_box(const Instance& inst, int b = 2);

/// Obstacle-avoiding distance to the exterior of the box. Zero outside the
/// box, one on the boundary ring, infinity for cells sealed off by obstacles.
/// Obstacle cells store one more than their cheapest free neighbour.
class DepthField {
 public:
  DepthField() = default;
  DepthField(Rect rect, std::vector<int> depth) : rect_(rect), depth_(std::move(depth)) {}

  int at(Cell c) const { return rect_.contains(c) ? depth_[rect_.index(c)] : 0; }
  const Rect& rect() const { return rect_; }

 private:
  Rect rect_;
  std::vector<int> depth_;
};

DepthField compute_depth(const Instance& inst, const BoundingBox& box);

/// Plain BFS distances from `source` over the closed rectangle `area`,
/// treating obstacles as blocked. Row-major per `area.index`.
std::vector<int> bfs_distances(const Instance& inst, const Rect& area, Cell source);

/// Exact obstacle-avoiding L1 distance to one target cell.
///
/// Each row of the oracle box keeps only the cells where the distance is
/// not the mean of its two horizontal neighbours (plus both row ends), so
/// a query is a binary search followed by linear interpolation. Cells
/// outside the box are answered through the nearest box cell: the box
/// boundary is obstacle-free, so the offset is plain L1.
class DistanceOracle {
 public:
  struct Breakpoint {
    std::int32_t x;
    std::int32_t dist;
  };

  DistanceOracle() = default;

  Cell target() const { return target_; }
  const Rect& rect() const { return rect_; }

  /// Distance from `p` to the target; kInfDistance on obstacles or when the
  /// target cannot be reached. `comparisons` (if given) is incremented by
  /// the number of key comparisons spent in the row search.
  int query(Cell p, std::size_t* comparisons = nullptr) const;

  std::size_t breakpoint_count() const { return points_.size(); }
  std::size_t row_breakpoint_count(int y) const;
  std::vector<Breakpoint> row(int y) const;

 private:
  friend DistanceOracle build_oracle(const Instance&, const BoundingBox&, Cell);

  int query_inside(Cell p, std::size_t* comparisons) const;

  Cell target_;
  Rect rect_;
  std::vector<std::uint32_t> row_offset_;  // height + 1 entries
  std::vector<Breakpoint> points_;
};

/// BFS from `target` over the bounding box (grown to contain the target),
/// then row compression.
DistanceOracle build_oracle(const Instance& inst, const BoundingBox& box, Cell target);

/// Oracles keyed by target cell, built on first use. Safe to share between
/// threads; returned oracles are immutable.
class OracleCache {
 public:
  OracleCache(const Instance& inst, BoundingBox box) : inst_(&inst), box_(box) {}

  std::shared_ptr<const DistanceOracle> get(Cell target) const;
  int distance(Cell from, Cell to) const { return get(to)->query(from); }

  const Instance& instance() const { return *inst_; }
  const BoundingBox& box() const { return box_; }

 private:
  const Instance* inst_;
  BoundingBox box_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Cell, std::shared_ptr<const DistanceOracle>, CellHash> cache_;
};

}  // namespace cmp
