#include "cmp/stepplan.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cmp {

std::int64_t step_weight(int d0, int dk) {
  const auto a = static_cast<std::int64_t>(d0);
  return (a - dk) * (a * a + 1);
}

std::vector<CandidatePath> candidate_paths(const Instance& inst, int robot, Cell from, int k,
                                           const DistanceOracle& oracle) {
  if (k < 1) throw std::invalid_argument("plan length k must be at least 1");
  const int d0 = oracle.query(from);
  std::vector<CandidatePath> out;
  CandidatePath cur{robot, {from}, 0};
  // Depth-first over move sequences in kAllMoves order.
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.cells.size()) == k + 1) {
      cur.weight = step_weight(d0, oracle.query(cur.cells.back()));
      out.push_back(cur);
      return;
    }
    for (Move mv : kAllMoves) {
      const Cell nx = apply_move(cur.cells.back(), mv);
      if (inst.is_obstacle(nx) || !is_finite(oracle.query(nx))) continue;
      cur.cells.push_back(nx);
      self(self);
      cur.cells.pop_back();
    }
  };
  rec(rec);
  // Among plans of equal weight the searches keep the first one found, so
  // put plans that make progress early first.
  std::vector<std::int64_t> lag(out.size(), 0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (std::size_t t = 1; t < out[c].cells.size(); ++t) lag[c] += oracle.query(out[c].cells[t]);
  }
  std::vector<std::size_t> idx(out.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return out[a].weight != out[b].weight ? out[a].weight > out[b].weight : lag[a] < lag[b];
  });
  std::vector<CandidatePath> sorted;
  sorted.reserve(out.size());
  for (std::size_t i : idx) sorted.push_back(std::move(out[i]));
  return sorted;
}

bool compatible(const CandidatePath& a, const CandidatePath& b) {
  const std::size_t len = std::min(a.cells.size(), b.cells.size());
  if (a.cells[0] == b.cells[0]) return false;
  for (std::size_t t = 1; t < len; ++t) {
    const Cell da = a.cells[t] - a.cells[t - 1];
    const Cell db = b.cells[t] - b.cells[t - 1];
    if (a.cells[t] == b.cells[t]) return false;
    if (a.cells[t] == b.cells[t - 1] && da != db) return false;
    if (b.cells[t] == a.cells[t - 1] && da != db) return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point at;
  std::size_t ticks = 0;
  bool hit = false;
  bool expired() {
    if (hit) return true;
    if ((++ticks & 1023) == 0 && Clock::now() > at) hit = true;
    return hit;
  }
};

// Exact best selection for `group` with every other robot's choice fixed.
// `choice` holds a feasible incumbent on entry and the optimum on exit
// (unless the deadline is hit first). Returns false on timeout.
class Selector {
 public:
  Selector(const std::vector<std::vector<CandidatePath>>& cands,
           const std::vector<std::vector<int>>& neighbours, std::vector<int>& choice, Deadline& dl)
      : cands_(cands), nbrs_(neighbours), choice_(choice), dl_(dl) {}

  bool solve(const std::vector<int>& group) {
    group_ = group;
    const std::size_t g = group.size();
    std::vector<char> in_group(cands_.size(), 0);
    for (int r : group) in_group[static_cast<std::size_t>(r)] = 1;
    // Candidates of each member compatible with the fixed outside choices,
    // best first.
    allowed_.assign(g, {});
    for (std::size_t i = 0; i < g; ++i) {
      const auto r = static_cast<std::size_t>(group[i]);
      for (std::size_t c = 0; c < cands_[r].size(); ++c) {
        bool ok = true;
        for (int o : nbrs_[r]) {
          const auto u = static_cast<std::size_t>(o);
          if (in_group[u]) continue;
          if (!compatible(cands_[r][c], cands_[u][static_cast<std::size_t>(choice_[u])])) {
            ok = false;
            break;
          }
        }
        if (ok) allowed_[i].push_back(static_cast<int>(c));
      }
      std::stable_sort(allowed_[i].begin(), allowed_[i].end(), [&](int a, int b) {
        return cands_[r][static_cast<std::size_t>(a)].weight >
               cands_[r][static_cast<std::size_t>(b)].weight;
      });
    }
    suffix_.assign(g + 1, 0);
    for (std::size_t i = g; i-- > 0;) {
      const auto r = static_cast<std::size_t>(group[i]);
      suffix_[i] = suffix_[i + 1] +
                   (allowed_[i].empty() ? 0 : cands_[r][static_cast<std::size_t>(allowed_[i][0])].weight);
    }
    best_ = 0;
    for (int r : group) {
      best_ += cands_[static_cast<std::size_t>(r)][static_cast<std::size_t>(choice_[static_cast<std::size_t>(r)])].weight;
    }
    cur_.assign(g, -1);
    best_sel_.clear();
    dfs(0, 0);
    if (!best_sel_.empty()) {
      for (std::size_t i = 0; i < g; ++i) choice_[static_cast<std::size_t>(group[i])] = best_sel_[i];
    }
    return !dl_.hit;
  }

 private:
  void dfs(std::size_t i, std::int64_t value) {
    if (dl_.expired()) return;
    if (value + suffix_[i] <= best_) return;
    if (i == group_.size()) {
      best_ = value;
      best_sel_ = cur_;
      return;
    }
    const auto r = static_cast<std::size_t>(group_[i]);
    for (int c : allowed_[i]) {
      const CandidatePath& p = cands_[r][static_cast<std::size_t>(c)];
      if (value + p.weight + suffix_[i + 1] <= best_) break;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const auto u = static_cast<std::size_t>(group_[j]);
        ok = compatible(p, cands_[u][static_cast<std::size_t>(cur_[j])]);
      }
      if (!ok) continue;
      cur_[i] = c;
      dfs(i + 1, value + p.weight);
      if (dl_.hit) return;
    }
  }

  const std::vector<std::vector<CandidatePath>>& cands_;
  const std::vector<std::vector<int>>& nbrs_;
  std::vector<int>& choice_;
  Deadline& dl_;
  std::vector<int> group_;
  std::vector<std::vector<int>> allowed_;
  std::vector<std::int64_t> suffix_;
  std::int64_t best_ = 0;
  std::vector<int> cur_;
  std::vector<int> best_sel_;
};

int wait_index(const std::vector<CandidatePath>& cands) {
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const auto& cells = cands[c].cells;
    if (std::all_of(cells.begin(), cells.end(), [&](Cell x) { return x == cells.front(); })) {
      return static_cast<int>(c);
    }
  }
  throw std::logic_error("candidate set lacks the all-wait plan");
}

}  // namespace

RoundPlan plan_round(const Instance& inst, const std::vector<Cell>& positions,
                     const std::vector<const DistanceOracle*>& oracles, const StepPlanConfig& cfg) {
  const std::size_t n = positions.size();
  if (cfg.k < 1) throw std::invalid_argument("plan length k must be at least 1");
  Deadline dl{Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(cfg.round_time_budget))};
  std::vector<std::vector<CandidatePath>> cands(n);
  std::vector<int> choice(n);
  for (std::size_t i = 0; i < n; ++i) {
    cands[i] = candidate_paths(inst, static_cast<int>(i), positions[i], cfg.k, *oracles[i]);
    choice[i] = wait_index(cands[i]);
  }

  // Robots farther apart than 2k cells cannot interfere within k steps.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return positions[static_cast<std::size_t>(a)] < positions[static_cast<std::size_t>(b)];
  });
  std::vector<std::vector<int>> nbrs(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Cell pa = positions[static_cast<std::size_t>(order[a])];
    for (std::size_t b = a + 1; b < n; ++b) {
      const Cell pb = positions[static_cast<std::size_t>(order[b])];
      if (pb.x - pa.x > 2 * cfg.k) break;
      if (l1(pa, pb) <= 2 * cfg.k) {
        nbrs[static_cast<std::size_t>(order[a])].push_back(order[b]);
        nbrs[static_cast<std::size_t>(order[b])].push_back(order[a]);
      }
    }
  }
  for (auto& v : nbrs) std::sort(v.begin(), v.end());

  // Connected groups of the interaction graph.
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> groups;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    groups.emplace_back();
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = static_cast<int>(groups.size() - 1);
    while (!stack.empty()) {
      const int r = stack.back();
      stack.pop_back();
      groups.back().push_back(r);
      for (int o : nbrs[static_cast<std::size_t>(r)]) {
        if (comp[static_cast<std::size_t>(o)] < 0) {
          comp[static_cast<std::size_t>(o)] = comp[s];
          stack.push_back(o);
        }
      }
    }
    std::sort(groups.back().begin(), groups.back().end());
  }

  RoundPlan out;
  Selector sel(cands, nbrs, choice, dl);
  std::mt19937_64 rng(cfg.seed);
  for (const std::vector<int>& group : groups) {
    if (static_cast<int>(group.size()) <= cfg.n_exact) {
      if (!sel.solve(group)) out.optimal = false;
      continue;
    }
    out.optimal = false;
    // Best responses from the all-wait start, then exact re-optimization of
    // small neighbourhoods.
    for (int pass = 0; pass < 8; ++pass) {
      bool changed = false;
      for (int r : group) {
        const int before = choice[static_cast<std::size_t>(r)];
        sel.solve({r});
        changed |= choice[static_cast<std::size_t>(r)] != before;
      }
      if (!changed || dl.hit) break;
    }
    const int iters = cfg.lns_iterations * static_cast<int>(std::min<std::size_t>(group.size(), 8));
    for (int it = 0; it < iters && !dl.hit; ++it) {
      const int r = group[static_cast<std::size_t>(rng() % group.size())];
      std::vector<int> hood = nbrs[static_cast<std::size_t>(r)];
      std::shuffle(hood.begin(), hood.end(), rng);
      hood.resize(std::min<std::size_t>(hood.size(), static_cast<std::size_t>(std::max(cfg.n_exact - 1, 0))));
      hood.push_back(r);
      std::sort(hood.begin(), hood.end());
      sel.solve(hood);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.selected.push_back(cands[i][static_cast<std::size_t>(choice[i])]);
    out.objective += out.selected.back().weight;
  }
  return out;
}

GreedyResult greedy_solve(const Instance& inst, const StepPlanConfig& cfg) {
  if (cfg.commit < 1 || cfg.commit > cfg.k) throw std::invalid_argument("commit must be in [1, k]");
  const std::size_t n = inst.size();
  const BoundingBox box = compute_bounding_box(inst);
  const OracleCache cache(inst, box);
  std::vector<const DistanceOracle*> oracles;
  std::vector<std::shared_ptr<const DistanceOracle>> keep;
  for (const Robot& r : inst.robots()) {
    keep.push_back(cache.get(r.target));
    oracles.push_back(keep.back().get());
  }
  const int w = box.side();
  const int window = cfg.stall_window > 0 ? cfg.stall_window : 3 * w;
  const int cap = cfg.max_rounds > 0 ? cfg.max_rounds : 50 * w;

  GreedyResult res;
  res.solution.instance_name = inst.name();
  std::vector<Cell> pos;
  for (const Robot& r : inst.robots()) {
    pos.push_back(r.start);
    res.solution.paths.push_back({r.start});
  }
  auto total = [&] {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += oracles[i]->query(pos[i]);
    return s;
  };
  std::int64_t best = total();
  int since_best = 0;
  StepPlanConfig round_cfg = cfg;
  while (best > 0) {
    if (res.rounds >= cap) {
      res.failure = "stalled: round cap of " + std::to_string(cap) + " reached";
      return res;
    }
    if (since_best >= window) {
      res.failure = "stalled: total distance " + std::to_string(best) + " did not improve for " +
                    std::to_string(window) + " rounds";
      return res;
    }
    round_cfg.seed = cfg.seed + static_cast<std::uint64_t>(res.rounds);
    const RoundPlan plan = plan_round(inst, pos, oracles, round_cfg);
    for (int s = 1; s <= cfg.commit; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        pos[i] = plan.selected[i].cells[static_cast<std::size_t>(s)];
        res.solution.paths[i].push_back(pos[i]);
      }
      ++res.rounds;
    }
    const std::int64_t now = total();
    if (now < best) {
      best = now;
      since_best = 0;
    } else {
      since_best += cfg.commit;
    }
  }
  res.success = true;
  res.solution = trim_solution(res.solution);
  return res;
}

}  // namespace cmp
