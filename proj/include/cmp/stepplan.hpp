#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmp/core.hpp"
#include "cmp/distance.hpp"

namespace cmp {

struct StepPlanConfig {
  int k = 3;
  /// Steps of each selected plan committed per round (1..k).
  int commit = 1;
  /// Wall-clock limit per round, in seconds.
  double round_time_budget = 2.0;
  /// Rounds without a new best total distance before giving up; 0 means 3w.
  int stall_window = 0;
  /// Hard round cap; 0 means 50w.
  int max_rounds = 0;
  /// Interacting groups up to this size are solved exactly.
  int n_exact = 4;
  /// Neighbourhood re-optimizations per large group and round.
  int lns_iterations = 64;
  std::uint64_t seed = 0;
};

/// A length-k plan of one robot from its current cell.
struct CandidatePath {
  int robot = -1;
  std::vector<Cell> cells;
  std::int64_t weight = 0;
};

/// (d0 - dk) * (d0^2 + 1) for distances d0 before and dk after the plan.
std::int64_t step_weight(int d0, int dk);

/// Every obstacle-free move sequence of length k, as given by `oracle`'s
/// distances. Cells with no route to the target are skipped. Sorted by
/// weight, then by how early the plan gets close to the target.
std::vector<CandidatePath> candidate_paths(const Instance& inst, int robot, Cell from, int k,
                                           const DistanceOracle& oracle);

/// Whether two plans can run side by side without a collision or overlap.
bool compatible(const CandidatePath& a, const CandidatePath& b);

struct RoundPlan {
  std::vector<CandidatePath> selected;  // per robot
  std::int64_t objective = 0;
  /// True when every interacting group was solved to optimality.
  bool optimal = true;
};

/// Selects one pairwise compatible plan per robot maximizing total weight.
RoundPlan plan_round(const Instance& inst, const std::vector<Cell>& positions,
                     const std::vector<const DistanceOracle*>& oracles, const StepPlanConfig& cfg);

struct GreedyResult {
  bool success = false;
  Solution solution;  // the committed steps, also on failure
  int rounds = 0;
  std::string failure;
};

GreedyResult greedy_solve(const Instance& inst, const StepPlanConfig& cfg = {});

}  // namespace cmp
