#include "cmp/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "cmp/errors.hpp"
#include "cmp/transform.hpp"
#include "cmp/validate.hpp"

namespace cmp {

bool ConflictQueue::push(int robot) {
  auto& flag = queued_[static_cast<std::size_t>(robot)];
  if (flag) return false;
  flag = 1;
  fifo_.push_back(robot);
  return true;
}

int ConflictQueue::pop() {
  const int r = fifo_.front();
  fifo_.pop_front();
  queued_[static_cast<std::size_t>(r)] = 0;
  ++pops_[static_cast<std::size_t>(r)];
  return r;
}

int ConflictQueue::weight(int robot) const {
  const int q = pops(robot);
  return 1 + q * q;
}

void ConflictQueue::reset_counts() { std::fill(pops_.begin(), pops_.end(), 0); }

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
 public:
  Timer() : start_(Clock::now()) {}
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_;
};

void require_feasible(const Instance& inst, const Solution& s) {
  const ValidationReport rep = validate(inst, s);
  if (!rep.feasible) {
    throw ValidationError("optimizer input is infeasible: " + describe(rep.violations.front()));
  }
}

std::vector<Cell> all_cells(const Solution& s) {
  std::vector<Cell> out;
  for (const Path& p : s.paths) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Current registered paths cut or padded to length m + 1.
Solution snapshot(const ReservationTable& table, std::size_t n, int m, const std::string& name) {
  Solution s{name, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const Path& p = table.path(static_cast<int>(i));
    Path q;
    for (int t = 0; t <= m; ++t) q.push_back(position_at(p, t));
    s.paths.push_back(std::move(q));
  }
  return s;
}

bool moves_at(const Path& p, int t) { return t > 0 && position_at(p, t) != position_at(p, t - 1); }

int stop_makespan(const OptimizeBudget& b, int lb) {
  return b.target_makespan > 0 ? std::max(b.target_makespan, lb) : lb;
}

}  // namespace

// ---------------------------------------------------------------- feasible

FeasibleResult feasible_optimize(const Instance& inst, const Solution& s,
                                 const OptimizeBudget& budget,
                                 const std::vector<FeasibleVariant>& variants,
                                 const ProgressFn& progress) {
  require_feasible(inst, s);
  const Timer timer;
  const std::size_t n = inst.size();
  FeasibleResult res;
  res.solution = trim_solution(s);
  int m = res.solution.makespan();
  if (n == 0 || m == 0) return res;

  const BoundingBox box = compute_bounding_box(inst);
  const OracleCache oracles(inst, box);
  const int stop_at = stop_makespan(budget, lower_bound(inst, oracles));
  const Rect region = search_region(box.rect, all_cells(res.solution));
  ReservationTable table(inst, region, TableMode::Feasible);
  for (std::size_t i = 0; i < n; ++i) table.register_path(static_cast<int>(i), res.solution.paths[i]);
  int last_movers = 0;
  for (std::size_t i = 0; i < n; ++i) last_movers += moves_at(table.path(static_cast<int>(i)), m);

  static constexpr FeasibleVariant kCycle[] = {FeasibleVariant::RandomTieBreak,
                                              FeasibleVariant::Reversed,
                                              FeasibleVariant::ReversedHold};
  std::mt19937_64 rng(budget.seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto out_of_budget = [&] {
    return timer.elapsed() >= budget.time_limit ||
           (budget.max_steps > 0 && res.replans >= budget.max_steps) || m <= stop_at;
  };
  for (std::size_t sweep = 0; !out_of_budget(); ++sweep) {
    const FeasibleVariant variant =
        variants.empty() ? kCycle[sweep % 3] : variants[sweep % variants.size()];
    std::shuffle(order.begin(), order.end(), rng);
    for (int id : order) {
      if (out_of_budget()) break;
      const Robot& rb = inst.robot(static_cast<std::size_t>(id));
      const Path old = table.path(id);
      const bool moved_last = moves_at(old, m);
      SearchConfig cfg;
      cfg.deadline = moved_last ? m : m - 1;
      cfg.seed = rng();
      switch (variant) {
        case FeasibleVariant::RandomTieBreak:
          cfg.tie_break = TieBreak::Random;
          break;
        case FeasibleVariant::ReversedHold: {
          const int slack = cfg.deadline - oracles.distance(rb.start, rb.target);
          if (slack > 0) cfg.hold = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(slack));
          cfg.direction = Direction::Reversed;
          break;
        }
        case FeasibleVariant::Reversed:
          cfg.direction = Direction::Reversed;
          break;
      }
      table.unregister_path(id);
      const Cell goal = cfg.direction == Direction::Reversed ? rb.start : rb.target;
      const SearchResult r = find_path(table, rb, cfg, *oracles.get(goal));
      ++res.replans;
      if (!r.found) {
        table.register_path(id, old);
        continue;
      }
      Path p = r.path;
      if (static_cast<int>(p.size()) > m + 1) p.resize(static_cast<std::size_t>(m) + 1);
      table.register_path(id, p);
      if (moved_last && !moves_at(p, m)) --last_movers;
      while (last_movers == 0 && m > 0) {
        --m;
        for (std::size_t i = 0; i < n; ++i) last_movers += moves_at(table.path(static_cast<int>(i)), m);
      }
    }
    res.trace.emplace_back(m, last_movers);
    if (progress) progress({timer.elapsed(), m, 0, "feasible"});
  }
  res.solution = trim_solution(snapshot(table, n, m, inst.name()));
  return res;
}

// ---------------------------------------------------------------- conflict

namespace {

struct RepairLoop {
  const Instance& inst;
  const OracleCache& oracles;
  ReservationTable& table;
  ConflictQueue& queue;
  const ConflictOptions& opt;
  std::mt19937_64& rng;
  std::vector<int> weights;
  std::size_t pops = 0;

  enum class Outcome { Emptied, Budget, SearchFailed };

  // Pops until the queue empties, `deadline` being the latest arrival.
  template <class Stop>
  Outcome run(int deadline, Stop&& stop) {
    while (!queue.empty()) {
      if (stop()) return Outcome::Budget;
      const int r = queue.pop();
      ++pops;
      weights[static_cast<std::size_t>(r)] = queue.weight(r);
      if (table.is_registered(r)) table.unregister_path(r);
      const Robot& rb = inst.robot(static_cast<std::size_t>(r));
      SearchConfig cfg;
      cfg.mode = SearchMode::Conflict;
      cfg.deadline = deadline;
      cfg.weights = &weights;
      cfg.tie_break = opt.tie_break;
      cfg.seed = rng();
      const SearchResult res = find_path(table, rb, cfg, *oracles.get(rb.target));
      if (!res.found) return Outcome::SearchFailed;
      std::vector<int> hit = table.conflicts_of(res.path, r);
      table.register_path(r, res.path);
      if (opt.shuffle_inserts) std::shuffle(hit.begin(), hit.end(), rng);
      for (int c : hit) queue.push(c);
    }
    return Outcome::Emptied;
  }
};

}  // namespace

ConflictResult conflict_optimize(const Instance& inst, const Solution& s,
                                 const OptimizeBudget& budget, const ConflictOptions& opt,
                                 const ProgressFn& progress) {
  require_feasible(inst, s);
  const Timer timer;
  const std::size_t n = inst.size();
  ConflictResult res;
  res.solution = trim_solution(s);
  int m = res.solution.makespan();
  const BoundingBox box = compute_bounding_box(inst);
  const OracleCache oracles(inst, box);
  const int lb = lower_bound(inst, oracles);
  const int stop_at = stop_makespan(budget, lb);
  if (m <= lb) {
    res.proven_optimal = true;
    res.stop_reason = "makespan equals the lower bound";
    return res;
  }

  const Rect region = search_region(box.rect, all_cells(res.solution));
  ReservationTable table(inst, region, TableMode::Conflict);
  for (std::size_t i = 0; i < n; ++i) table.register_path(static_cast<int>(i), res.solution.paths[i]);
  ConflictQueue queue(n);
  std::mt19937_64 rng(budget.seed);
  RepairLoop loop{inst, oracles, table, queue, opt, rng, std::vector<int>(n, 1)};
  auto stop = [&] {
    if (progress && loop.pops % 1024 == 0) {
      progress({timer.elapsed(), m, queue.size(), "conflict"});
    }
    return timer.elapsed() >= budget.time_limit ||
           (budget.max_steps > 0 && loop.pops >= budget.max_steps);
  };

  res.stop_reason = "target makespan reached";
  while (m > stop_at) {
    for (std::size_t i = 0; i < n; ++i) {
      if (moves_at(table.path(static_cast<int>(i)), m)) queue.push(static_cast<int>(i));
    }
    const auto outcome = loop.run(m - 1, stop);
    if (outcome != RepairLoop::Outcome::Emptied) {
      res.stop_reason = outcome == RepairLoop::Outcome::Budget ? "budget exhausted" : "search failed";
      break;
    }
    Solution next = snapshot(table, n, m - 1, inst.name());
    const ValidationReport rep = validate(inst, next);
    if (!rep.feasible) {
      throw InternalError("conflict repair produced an infeasible solution: " +
                          describe(rep.violations.front()));
    }
    res.solution = trim_solution(next);
    m = res.solution.makespan();
    ++res.improvements;
    if (progress) progress({timer.elapsed(), m, 0, "conflict"});
    if (opt.reset_counts) {
      queue.reset_counts();
      std::fill(loop.weights.begin(), loop.weights.end(), 1);
    }
  }
  res.pops = loop.pops;
  res.queue_left = queue.size();
  res.proven_optimal = m <= lb;
  return res;
}

ConflictResult conflict_from_scratch(const Instance& inst, int m0, const OptimizeBudget& budget,
                                     const ConflictOptions& opt, const ProgressFn& progress) {
  const Timer timer;
  const std::size_t n = inst.size();
  const BoundingBox box = compute_bounding_box(inst);
  const OracleCache oracles(inst, box);
  const int lb = lower_bound(inst, oracles);
  if (m0 < lb) {
    throw std::invalid_argument("target makespan " + std::to_string(m0) +
                                " is below the lower bound " + std::to_string(lb));
  }
  ReservationTable table(inst, search_region(box.rect, {}), TableMode::Conflict);
  ConflictQueue queue(n);
  std::mt19937_64 rng(budget.seed);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  if (opt.shuffle_inserts) std::shuffle(ids.begin(), ids.end(), rng);
  for (int id : ids) queue.push(id);
  RepairLoop loop{inst, oracles, table, queue, opt, rng, std::vector<int>(n, 1)};
  auto stop = [&] {
    if (progress && loop.pops % 1024 == 0) {
      progress({timer.elapsed(), m0, queue.size(), "scratch"});
    }
    return timer.elapsed() >= budget.time_limit ||
           (budget.max_steps > 0 && loop.pops >= budget.max_steps);
  };
  ConflictResult res;
  const auto outcome = loop.run(m0, stop);
  res.pops = loop.pops;
  res.queue_left = queue.size();
  if (outcome != RepairLoop::Outcome::Emptied) {
    res.stop_reason = outcome == RepairLoop::Outcome::Budget ? "budget exhausted" : "search failed";
    return res;
  }
  Solution sol = snapshot(table, n, m0, inst.name());
  const ValidationReport rep = validate(inst, sol);
  if (!rep.feasible) {
    throw InternalError("conflict repair produced an infeasible solution: " +
                        describe(rep.violations.front()));
  }
  res.solution = trim_solution(sol);
  res.proven_optimal = res.solution.makespan() <= lb;
  res.stop_reason = "queue emptied";
  return res;
}

// ---------------------------------------------------------------- stalls

AntiStallResult anti_stall(const Instance& inst, const Solution& s, const OptimizeBudget& budget,
                           const OptimizeBudget& slice, const ProgressFn& progress) {
  require_feasible(inst, s);
  const Timer timer;
  AntiStallResult res;
  res.solution = trim_solution(s);
  const int lb = lower_bound(inst);
  const int stop_at = stop_makespan(budget, lb);
  Solution current = res.solution;
  static constexpr StallTactic kRotation[] = {StallTactic::Reverse, StallTactic::FeasibleShuffle,
                                             StallTactic::RandomPaths,
                                             StallTactic::RandomInsertion};
  for (std::size_t k = 0; res.solution.makespan() > stop_at; ++k) {
    if (budget.max_steps > 0 && k >= budget.max_steps) break;
    const double left = budget.time_limit - timer.elapsed();
    if (left <= 0) break;
    OptimizeBudget b = slice;
    b.seed = budget.seed + k;
    b.time_limit = std::min(slice.time_limit, left);
    b.target_makespan = budget.target_makespan;
    const StallTactic tactic = kRotation[k % 4];
    ConflictOptions opt;
    switch (tactic) {
      case StallTactic::Reverse: {
        const Instance rinst = apply_transform(inst, Transform::Reverse);
        const ConflictResult r =
            conflict_optimize(rinst, apply_transform(current, Transform::Reverse), b, opt, progress);
        current = apply_transform(r.solution, Transform::Reverse);
        break;
      }
      case StallTactic::FeasibleShuffle: {
        const FeasibleResult f =
            feasible_optimize(inst, current, b, {FeasibleVariant::RandomTieBreak}, progress);
        current = conflict_optimize(inst, f.solution, b, opt, progress).solution;
        break;
      }
      case StallTactic::RandomPaths:
        opt.tie_break = TieBreak::Random;
        current = conflict_optimize(inst, current, b, opt, progress).solution;
        break;
      case StallTactic::RandomInsertion:
        opt.shuffle_inserts = true;
        current = conflict_optimize(inst, current, b, opt, progress).solution;
        break;
    }
    if (current.makespan() < res.solution.makespan()) res.solution = current;
    res.log.emplace_back(tactic, current.makespan());
  }
  res.proven_optimal = res.solution.makespan() <= lb;
  return res;
}

}  // namespace cmp
