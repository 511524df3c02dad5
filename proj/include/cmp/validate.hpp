#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmp/core.hpp"
#include "cmp/distance.hpp"

namespace cmp {

/// Constraint ids: 1 endpoints, 2 unit steps, 3 obstacles, 4 collision,
/// 5 overlap (entering a just-vacated cell needs the same move).
struct Violation {
  int constraint = 0;
  std::vector<int> robots;
  int time = 0;
  Cell cell;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  bool feasible = true;
  std::vector<Violation> violations;
  int makespan = 0;
  std::int64_t distance_sum = 0;
};

/// Checks every constraint at every time step and reports all violations.
/// Throws ValidationError on structural problems (path count or length
/// mismatch, empty paths).
ValidationReport validate(const Instance& inst, const Solution& s);

/// Max over robots of the obstacle-avoiding start-to-target distance.
/// Throws InfeasibleError when some target is unreachable.
int lower_bound(const Instance& inst, const OracleCache& oracles);
int lower_bound(const Instance& inst);

/// Number of non-wait moves over all robots.
std::int64_t distance_sum(const Solution& s);

/// Robots whose position changes between times m-1 and m.
std::vector<int> robots_moving_at(const Solution& s, int t);

std::string describe(const Violation& v);

}  // namespace cmp
