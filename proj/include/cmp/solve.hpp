#pragma once

#include <cstdint>
#include <string>

#include "cmp/optimize.hpp"
#include "cmp/stepplan.hpp"
#include "cmp/storage.hpp"

namespace cmp {

struct SolveOptions {
  /// "greedy", "cross", "cootie", "dichotomy" or "escape".
  std::string strategy = "cross";
  /// Depth parameter of the storage strategies; 0 picks the default.
  int b = 0;
  /// Nonzero seeds shuffle depth ties (storage) and drive the step planner.
  std::uint64_t seed = 0;
  Matching matching = Matching::Greedy;
  bool strict_escape = false;
  StepPlanConfig greedy;
};

/// Runs one strategy. Throws UnsupportedInstance for a strategy that does
/// not accept the instance, SolverFailure when the step planner stalls.
Solution solve(const Instance& inst, const SolveOptions& opt);

enum class OptimizeMethod { Feasible, Conflict, Auto };

OptimizeMethod parse_optimize_method(const std::string& name);

struct OptimizeOptions {
  OptimizeMethod method = OptimizeMethod::Auto;
  ConflictOptions conflict;
};

/// Feasible and conflict optimizers alone, or chained (auto): a quarter of
/// the time for the feasible optimizer, half for the conflict optimizer and
/// the rest for stall tactics.
Solution optimize(const Instance& inst, const Solution& s, const OptimizeBudget& budget,
                  const OptimizeOptions& opt, const ProgressFn& progress = {});

}  // namespace cmp
