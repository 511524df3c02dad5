#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "cmp/errors.hpp"

namespace cmp {

/// Lattice point. Coordinates are signed: storage cells routinely sit at
/// negative coordinates even when an instance is non-negative.
struct Cell {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
  friend constexpr Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }
};

inline constexpr std::int32_t kCoordLimit = 1'000'000;

constexpr int l1(Cell a, Cell b) {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx + dy;
}

struct CellHash {
  std::size_t operator()(Cell c) const noexcept {
    const auto ux = static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x));
    const auto uy = static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.y));
    std::uint64_t h = (ux << 32) | uy;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

using CellSet = std::unordered_set<Cell, CellHash>;

enum class Move : std::uint8_t { North, South, East, West, Wait };

inline constexpr std::array<Move, 5> kAllMoves{Move::North, Move::South, Move::East,
                                               Move::West, Move::Wait};

constexpr Cell delta(Move mv) {
  switch (mv) {
    case Move::North: return {0, 1};
    case Move::South: return {0, -1};
    case Move::East: return {1, 0};
    case Move::West: return {-1, 0};
    case Move::Wait: break;
  }
  return {0, 0};
}

constexpr Move opposite(Move mv) {
  switch (mv) {
    case Move::North: return Move::South;
    case Move::South: return Move::North;
    case Move::East: return Move::West;
    case Move::West: return Move::East;
    case Move::Wait: break;
  }
  return Move::Wait;
}

constexpr Cell apply_move(Cell c, Move mv) { return c + delta(mv); }

/// Move that takes `from` to `to`; throws if the cells are not equal or adjacent.
Move move_between(Cell from, Cell to);

struct Robot {
  int id = 0;
  Cell start;
  Cell target;

  friend bool operator==(const Robot&, const Robot&) = default;
};

/// Obstacles plus robots. Construct through `make_instance` (or io) so the
/// invariants are checked; the obstacle lookup set is kept in sync there.
class Instance {
 public:
  Instance() = default;
  Instance(std::string name, std::vector<Cell> obstacles, std::vector<Robot> robots);

  const std::string& name() const { return name_; }
  const std::vector<Cell>& obstacles() const { return obstacles_; }
  const std::vector<Robot>& robots() const { return robots_; }
  std::size_t size() const { return robots_.size(); }
  const Robot& robot(std::size_t i) const { return robots_[i]; }

  bool is_obstacle(Cell c) const { return obstacle_set_.contains(c); }
  bool has_obstacles() const { return !obstacles_.empty(); }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.name_ == b.name_ && a.obstacles_ == b.obstacles_ && a.robots_ == b.robots_;
  }

 private:
  std::string name_;
  std::vector<Cell> obstacles_;  // sorted, unique
  std::vector<Robot> robots_;
  CellSet obstacle_set_;
};

/// Builds an instance from parallel start/target lists. Throws
/// ValidationError naming the offending robot index.
Instance make_instance(std::string name, std::vector<Cell> obstacles,
                       const std::vector<Cell>& starts, const std::vector<Cell>& targets);

/// Dense path: one cell per time step, p(0..m).
using Path = std::vector<Cell>;

struct Solution {
  std::string instance_name;
  std::vector<Path> paths;

  /// Common path length minus one; 0 for an empty solution.
  int makespan() const;

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Position at time t with the stationary-after-end convention.
inline Cell position_at(const Path& p, int t) {
  if (t <= 0) return p.front();
  if (static_cast<std::size_t>(t) >= p.size()) return p.back();
  return p[static_cast<std::size_t>(t)];
}

/// Extends every path by repeating its last cell up to length m_new + 1.
Solution pad_solution(const Solution& s, int m_new);

/// Smallest m such that no robot moves after time m.
int effective_makespan(const Solution& s);

/// Drops trailing all-wait steps.
Solution trim_solution(const Solution& s);

/// Path of length m that waits at `c`.
Path stationary_path(Cell c, int m);

}  // namespace cmp

template <>
struct std::hash<cmp::Cell> : cmp::CellHash {};
