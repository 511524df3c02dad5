#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "cmp/astar.hpp"
#include "cmp/core.hpp"

namespace cmp {

/// Stopping rules shared by the optimizers. Runs are deterministic for a
/// fixed seed as long as the wall-clock limit is not what stops them.
struct OptimizeBudget {
  double time_limit = 60.0;  // seconds
  /// Robot re-plans (feasible) or queue pops (conflict); 0 for no limit.
  std::size_t max_steps = 0;
  /// Stop once the makespan is at most this; 0 means the lower bound.
  int target_makespan = 0;
  std::uint64_t seed = 0;
};

struct ProgressRecord {
  double elapsed = 0;  // seconds since the run started
  int makespan = 0;
  std::size_t queue = 0;
  std::string phase;
};
using ProgressFn = std::function<void(const ProgressRecord&)>;

enum class FeasibleVariant { RandomTieBreak, Reversed, ReversedHold };

struct FeasibleResult {
  Solution solution;
  std::size_t replans = 0;
  /// Makespan and number of robots moving in the last step, per sweep.
  std::vector<std::pair<int, int>> trace;
};

/// Reroutes one robot at a time against all others, never letting the
/// makespan grow nor a robot that was still in the last step start moving
/// there. With `variants` empty the three variants are cycled per sweep.
FeasibleResult feasible_optimize(const Instance& inst, const Solution& s,
                                 const OptimizeBudget& budget,
                                 const std::vector<FeasibleVariant>& variants = {},
                                 const ProgressFn& progress = {});

/// FIFO of robot ids without duplicates, counting pops per robot.
class ConflictQueue {
 public:
  explicit ConflictQueue(std::size_t n) : queued_(n, 0), pops_(n, 0) {}

  /// False when `robot` is already queued.
  bool push(int robot);
  int pop();
  bool empty() const { return fifo_.empty(); }
  std::size_t size() const { return fifo_.size(); }
  bool contains(int robot) const { return queued_[static_cast<std::size_t>(robot)] != 0; }
  int pops(int robot) const { return pops_[static_cast<std::size_t>(robot)]; }
  /// 1 + q^2 for q pops so far.
  int weight(int robot) const;
  void reset_counts();

 private:
  std::deque<int> fifo_;
  std::vector<char> queued_;
  std::vector<int> pops_;
};

struct ConflictOptions {
  /// Reset pop counts after every makespan improvement.
  bool reset_counts = true;
  /// Shuffle each pop's newly conflicting robots before queueing them.
  bool shuffle_inserts = false;
  TieBreak tie_break = TieBreak::Deterministic;
};

struct ConflictResult {
  /// Best feasible solution found (the input when nothing improved).
  Solution solution;
  bool proven_optimal = false;
  int improvements = 0;
  std::size_t pops = 0;
  std::size_t queue_left = 0;
  std::string stop_reason;
};

/// Repairs towards makespan m-1 by rerouting queued robots with weighted
/// conflicts allowed, then m-2, and so on. Throws ValidationError when `s`
/// is infeasible.
ConflictResult conflict_optimize(const Instance& inst, const Solution& s,
                                 const OptimizeBudget& budget, const ConflictOptions& opt = {},
                                 const ProgressFn& progress = {});

/// Same repair loop with every robot queued and pathless at makespan m0.
/// `solution` is empty on failure.
ConflictResult conflict_from_scratch(const Instance& inst, int m0, const OptimizeBudget& budget,
                                     const ConflictOptions& opt = {},
                                     const ProgressFn& progress = {});

enum class StallTactic { Reverse, FeasibleShuffle, RandomPaths, RandomInsertion };

struct AntiStallResult {
  Solution solution;
  std::vector<std::pair<StallTactic, int>> log;  // tactic and makespan after it
  bool proven_optimal = false;
};

/// Alternates conflict-optimizer rounds with the four stall tactics in a
/// fixed rotation. Each tactic gets `slice` as its own budget.
AntiStallResult anti_stall(const Instance& inst, const Solution& s, const OptimizeBudget& budget,
                           const OptimizeBudget& slice, const ProgressFn& progress = {});

}  // namespace cmp
