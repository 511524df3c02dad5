#include "cmp/solve.hpp"

#include <algorithm>
#include <stdexcept>

#include "cmp/errors.hpp"
#include "cmp/distance.hpp"

namespace cmp {

Solution solve(const Instance& inst, const SolveOptions& opt) {
  if (opt.strategy == "greedy") {
    StepPlanConfig cfg = opt.greedy;
    cfg.seed = opt.seed;
    GreedyResult r = greedy_solve(inst, cfg);
    if (!r.success) throw SolverFailure(r.failure);
    return r.solution;
  }
  const StorageKind kind = parse_storage_kind(opt.strategy);
  StorageOptions so;
  so.matching = opt.matching;
  so.shuffle_ties = opt.seed != 0;
  so.seed = opt.seed;
  const BoundingBox box = compute_bounding_box(inst, opt.b > 0 ? opt.b : default_depth(kind));
  const OracleCache oracles(inst, box);
  StoragePlan plan;
  switch (kind) {
    case StorageKind::Cross: plan = build_cross(inst, box, oracles, so); break;
    case StorageKind::Cootie: plan = build_cootie(inst, box, so); break;
    case StorageKind::Dichotomy: plan = build_dichotomy(inst, box, so); break;
    case StorageKind::Escape: plan = build_escape(inst, box, so, opt.strict_escape); break;
  }
  return run_two_phase(inst, box, plan, oracles).solution;
}

OptimizeMethod parse_optimize_method(const std::string& name) {
  if (name == "feasible") return OptimizeMethod::Feasible;
  if (name == "conflict") return OptimizeMethod::Conflict;
  if (name == "auto") return OptimizeMethod::Auto;
  throw std::invalid_argument("unknown optimize method '" + name + "'");
}

Solution optimize(const Instance& inst, const Solution& s, const OptimizeBudget& budget,
                  const OptimizeOptions& opt, const ProgressFn& progress) {
  switch (opt.method) {
    case OptimizeMethod::Feasible:
      return feasible_optimize(inst, s, budget, {}, progress).solution;
    case OptimizeMethod::Conflict:
      return conflict_optimize(inst, s, budget, opt.conflict, progress).solution;
    case OptimizeMethod::Auto:
      break;
  }
  OptimizeBudget part = budget;
  part.time_limit = budget.time_limit / 4;
  Solution cur = feasible_optimize(inst, s, part, {}, progress).solution;
  part.time_limit = budget.time_limit / 2;
  const ConflictResult c = conflict_optimize(inst, cur, part, opt.conflict, progress);
  cur = c.solution;
  if (c.proven_optimal) return cur;
  part.time_limit = budget.time_limit / 4;
  OptimizeBudget slice = part;
  slice.time_limit = std::max(part.time_limit / 8, 0.05);
  return anti_stall(inst, cur, part, slice, progress).solution;
}

}  // namespace cmp
