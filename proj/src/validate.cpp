#include "cmp/validate.hpp"

#include <algorithm>
#include <unordered_map>

namespace cmp {

ValidationReport validate(const Instance& inst, const Solution& s) {
  const std::size_t n = inst.size();
  if (s.paths.size() != n) {
    throw ValidationError("solution has " + std::to_string(s.paths.size()) + " paths for " +
                          std::to_string(n) + " robots");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (s.paths[i].empty()) throw ValidationError("path " + std::to_string(i) + " is empty");
    if (s.paths[i].size() != s.paths.front().size()) {
      throw ValidationError("path " + std::to_string(i) + " has length " +
                            std::to_string(s.paths[i].size() - 1) + ", expected " +
                            std::to_string(s.paths.front().size() - 1));
    }
  }

  ValidationReport report;
  report.makespan = s.makespan();
  report.distance_sum = distance_sum(s);
  const int m = report.makespan;
  auto add = [&](int constraint, std::vector<int> robots, int t, Cell c) {
    report.violations.push_back({constraint, std::move(robots), t, c});
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Path& p = s.paths[i];
    const Robot& r = inst.robot(i);
    const int id = static_cast<int>(i);
    if (p.front() != r.start) add(1, {id}, 0, p.front());
    if (p.back() != r.target) add(1, {id}, m, p.back());
    for (int t = 0; t <= m; ++t) {
      const Cell c = p[static_cast<std::size_t>(t)];
      if (inst.is_obstacle(c)) add(3, {id}, t, c);
      if (t > 0 && l1(c, p[static_cast<std::size_t>(t) - 1]) > 1) add(2, {id}, t, c);
    }
  }

  // Per time step: cell -> first robot there, chained through `next` when
  // several robots share the cell (only in infeasible inputs).
  std::unordered_map<Cell, int, CellHash> prev;
  std::unordered_map<Cell, int, CellHash> cur;
  std::vector<int> prev_next(n, -1);
  std::vector<int> cur_next(n, -1);
  prev.reserve(n * 2);
  cur.reserve(n * 2);
  for (int t = 0; t <= m; ++t) {
    cur.clear();
    const auto ut = static_cast<std::size_t>(t);
    for (std::size_t i = 0; i < n; ++i) {
      const Cell c = s.paths[i][ut];
      auto [it, inserted] = cur.emplace(c, static_cast<int>(i));
      cur_next[i] = -1;
      if (!inserted) {
        for (int j = it->second; j != -1; j = cur_next[static_cast<std::size_t>(j)]) {
          add(4, {j, static_cast<int>(i)}, t, c);
        }
        cur_next[i] = it->second;
        it->second = static_cast<int>(i);
      }
    }
    if (t > 0) {
      // Constraint 5 from the entering robot's side covers both orders.
      for (std::size_t i = 0; i < n; ++i) {
        const Cell c = s.paths[i][ut];
        const auto it = prev.find(c);
        if (it == prev.end()) continue;
        const Cell di = c - s.paths[i][ut - 1];
        for (int j = it->second; j != -1; j = prev_next[static_cast<std::size_t>(j)]) {
          if (j == static_cast<int>(i)) continue;
          const auto uj = static_cast<std::size_t>(j);
          const Cell dj = s.paths[uj][ut] - s.paths[uj][ut - 1];
          if (di != dj) add(5, {static_cast<int>(i), j}, t, c);
        }
      }
    }
    std::swap(prev, cur);
    std::swap(prev_next, cur_next);
  }
  report.feasible = report.violations.empty();
  return report;
}

int lower_bound(const Instance& inst, const OracleCache& oracles) {
  int best = 0;
  for (const Robot& r : inst.robots()) {
    const int d = oracles.distance(r.start, r.target);
    if (!is_finite(d)) {
      throw InfeasibleError("target of robot " + std::to_string(r.id) +
                            " is unreachable from its start");
    }
    best = std::max(best, d);
  }
  return best;
}

int lower_bound(const Instance& inst) {
  OracleCache cache(inst, compute_bounding_box(inst));
  return lower_bound(inst, cache);
}

std::int64_t distance_sum(const Solution& s) {
  std::int64_t total = 0;
  for (const Path& p : s.paths) {
    for (std::size_t t = 1; t < p.size(); ++t) total += p[t] != p[t - 1] ? 1 : 0;
  }
  return total;
}

std::vector<int> robots_moving_at(const Solution& s, int t) {
  std::vector<int> out;
  if (t <= 0) return out;
  for (std::size_t i = 0; i < s.paths.size(); ++i) {
    if (position_at(s.paths[i], t) != position_at(s.paths[i], t - 1)) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

std::string describe(const Violation& v) {
  static constexpr const char* kNames[] = {"", "endpoint", "step length", "obstacle",
                                           "collision", "overlap"};
  std::string s = "constraint " + std::to_string(v.constraint) + " (" + kNames[v.constraint] +
                  ") at t=" + std::to_string(v.time) + " cell (" + std::to_string(v.cell.x) + "," +
                  std::to_string(v.cell.y) + ") robots";
  for (int r : v.robots) s += " " + std::to_string(r);
  return s;
}

}  // namespace cmp
