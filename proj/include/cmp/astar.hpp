#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmp/core.hpp"
#include "cmp/distance.hpp"
#include "cmp/grid.hpp"

namespace cmp {

/// Robot weight that forbids any conflict with that robot.
inline constexpr int kInfWeight = std::numeric_limits<int>::max() / 4;
inline constexpr int kNoDeadline = std::numeric_limits<int>::max() / 4;

enum class TableMode { Feasible, Conflict };

/// Space-time occupancy of registered paths over a fixed rectangular region.
///
/// Layers are dense per time step up to the horizon H (the longest
/// registered path). A robot whose path ends before H is parked at its last
/// cell, and every robot is parked for all t > H. Conflict tables keep all
/// occupants of a shared cell in a side map.
class ReservationTable {
 public:
  ReservationTable(const Instance& inst, Rect region, TableMode mode);

  const Instance& instance() const { return *inst_; }
  const Rect& region() const { return region_; }
  TableMode mode() const { return mode_; }
  int horizon() const { return horizon_; }

  /// Throws std::logic_error on double registration, and in feasible mode
  /// when the path shares a (cell, time) with a registered robot.
  /// Throws std::out_of_range when the path leaves the region.
  void register_path(int robot, Path p);
  /// Throws std::logic_error unless `robot` is registered with exactly `p`.
  void unregister_path(int robot, const Path& p);
  void unregister_path(int robot);

  bool is_registered(int robot) const { return registered_[static_cast<std::size_t>(robot)]; }
  const Path& path(int robot) const { return paths_[static_cast<std::size_t>(robot)]; }
  Cell position(int robot, int t) const { return position_at(path(robot), t); }

  bool blocked(std::size_t idx) const { return blocked_[idx] != 0; }

  /// Robots at `c` at time t (post-horizon parking applied).
  std::vector<int> occupants(Cell c, int t) const;

  template <class F>
  void for_each_occupant(std::size_t idx, int t, F&& f) const {
    const std::size_t layer = static_cast<std::size_t>(std::clamp(t, 0, horizon_));
    const std::int32_t v = occ_[layer * area_ + idx];
    if (v >= 0) {
      f(static_cast<int>(v));
    } else if (v == kMulti) {
      for (int r : overflow_.at(layer * area_ + idx)) f(r);
    }
  }

  /// Robots whose registered paths violate the collision or overlap
  /// constraint against `p` (driven by `robot`), at any time including the
  /// parked tail. Sorted, without duplicates.
  std::vector<int> conflicts_of(const Path& p, int robot) const;

  /// Grows the dense layers to `h`, parking everyone; never shrinks.
  void extend_horizon(int h);

  friend bool operator==(const ReservationTable& a, const ReservationTable& b);

 private:
  static constexpr std::int32_t kEmpty = -1;
  static constexpr std::int32_t kMulti = -2;

  void add(std::size_t layer, std::size_t idx, int robot);
  void remove(std::size_t layer, std::size_t idx, int robot);

  const Instance* inst_;
  Rect region_;
  TableMode mode_;
  std::size_t area_;
  int horizon_ = 0;
  std::vector<std::uint8_t> blocked_;
  std::vector<std::int32_t> occ_;
  std::unordered_map<std::size_t, std::vector<int>> overflow_;
  std::vector<Path> paths_;
  std::vector<bool> registered_;
};

enum class SearchMode { Feasible, Conflict };
enum class Direction { Forward, Reversed };
enum class TieBreak { Deterministic, Random };

struct SearchConfig {
  SearchMode mode = SearchMode::Feasible;
  Direction direction = Direction::Forward;
  /// Latest arrival time. Reversed and conflict searches need a finite one;
  /// in reversed search it is also the time frame being mirrored.
  int deadline = kNoDeadline;
  /// Steps the robot must spend at its target before the deadline.
  int hold = 0;
  TieBreak tie_break = TieBreak::Deterministic;
  std::uint64_t seed = 0;
  /// Conflict mode only: weight per robot id; kInfWeight forbids conflicts.
  const std::vector<int>* weights = nullptr;
  std::size_t expansion_budget = 2'000'000;
};

struct SearchResult {
  bool found = false;
  /// Forward-time path from the robot's start. Forward searches end at the
  /// arrival time; reversed searches span exactly [0, deadline].
  Path path;
  std::int64_t conflict_weight = 0;
  int arrival = -1;
  std::size_t expansions = 0;
  /// On failure: reason and the smallest remaining distance to the goal seen.
  std::string failure;
  int closest = kInfDistance;
};

/// Space-time A* for `robot` against the registered paths. The oracle must
/// target the search goal: the robot's target going forward, its start when
/// reversed. The robot must not be registered.
SearchResult find_path(const ReservationTable& table, const Robot& robot, const SearchConfig& cfg,
                       const DistanceOracle& oracle);

/// Region used for searches: the hull of the box and `extra` cells, plus a
/// slack ring of two cells.
Rect search_region(const Rect& box, const std::vector<Cell>& extra);

}  // namespace cmp
