#include "cmp/astar.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <stdexcept>

namespace cmp {

ReservationTable::ReservationTable(const Instance& inst, Rect region, TableMode mode)
    : inst_(&inst),
      region_(region),
      mode_(mode),
      area_(region.area()),
      blocked_(area_, 0),
      occ_(area_, kEmpty),
      paths_(inst.size()),
      registered_(inst.size(), false) {
  for (Cell o : inst.obstacles()) {
    if (region_.contains(o)) blocked_[region_.index(o)] = 1;
  }
}

void ReservationTable::add(std::size_t layer, std::size_t idx, int robot) {
  std::int32_t& v = occ_[layer * area_ + idx];
  if (v == kEmpty) {
    v = robot;
  } else if (v >= 0) {
    overflow_[layer * area_ + idx] = {v, robot};
    v = kMulti;
  } else {
    overflow_[layer * area_ + idx].push_back(robot);
  }
}

void ReservationTable::remove(std::size_t layer, std::size_t idx, int robot) {
  const std::size_t key = layer * area_ + idx;
  std::int32_t& v = occ_[key];
  if (v == robot) {
    v = kEmpty;
    return;
  }
  if (v != kMulti) throw std::logic_error("reservation table out of sync");
  auto it = overflow_.find(key);
  auto& list = it->second;
  const auto pos = std::find(list.begin(), list.end(), robot);
  if (pos == list.end()) throw std::logic_error("reservation table out of sync");
  list.erase(pos);
  if (list.size() == 1) {
    v = list.front();
    overflow_.erase(it);
  }
}

void ReservationTable::extend_horizon(int h) {
  if (h <= horizon_) return;
  const auto last = static_cast<std::size_t>(horizon_);
  const std::size_t layers = static_cast<std::size_t>(h) + 1;
  occ_.resize(layers * area_);
  std::vector<std::pair<std::size_t, std::vector<int>>> multi;
  for (std::size_t idx = 0; idx < area_; ++idx) {
    if (occ_[last * area_ + idx] == kMulti) multi.emplace_back(idx, overflow_.at(last * area_ + idx));
  }
  for (std::size_t layer = last + 1; layer < layers; ++layer) {
    std::copy_n(occ_.begin() + static_cast<std::ptrdiff_t>(last * area_), area_,
                occ_.begin() + static_cast<std::ptrdiff_t>(layer * area_));
    for (const auto& [idx, list] : multi) overflow_[layer * area_ + idx] = list;
  }
  horizon_ = h;
}

void ReservationTable::register_path(int robot, Path p) {
  const auto r = static_cast<std::size_t>(robot);
  if (r >= paths_.size()) throw std::logic_error("unknown robot " + std::to_string(robot));
  if (registered_[r]) throw std::logic_error("robot " + std::to_string(robot) + " already registered");
  if (p.empty()) throw std::logic_error("cannot register an empty path");
  for (Cell c : p) {
    if (!region_.contains(c)) {
      throw std::out_of_range("path of robot " + std::to_string(robot) + " leaves the search region");
    }
  }
  extend_horizon(static_cast<int>(p.size()) - 1);
  if (mode_ == TableMode::Feasible) {
    for (int t = 0; t <= horizon_; ++t) {
      const std::size_t idx = region_.index(position_at(p, t));
      if (occ_[static_cast<std::size_t>(t) * area_ + idx] != kEmpty) {
        throw std::logic_error("robot " + std::to_string(robot) + " collides at t=" +
                               std::to_string(t) + " in a feasible table");
      }
    }
  }
  for (int t = 0; t <= horizon_; ++t) {
    add(static_cast<std::size_t>(t), region_.index(position_at(p, t)), robot);
  }
  paths_[r] = std::move(p);
  registered_[r] = true;
}

void ReservationTable::unregister_path(int robot, const Path& p) {
  const auto r = static_cast<std::size_t>(robot);
  if (r >= paths_.size() || !registered_[r] || paths_[r] != p) {
    throw std::logic_error("robot " + std::to_string(robot) + " is not registered with this path");
  }
  unregister_path(robot);
}

void ReservationTable::unregister_path(int robot) {
  const auto r = static_cast<std::size_t>(robot);
  if (r >= paths_.size() || !registered_[r]) {
    throw std::logic_error("robot " + std::to_string(robot) + " is not registered");
  }
  for (int t = 0; t <= horizon_; ++t) {
    remove(static_cast<std::size_t>(t), region_.index(position_at(paths_[r], t)), robot);
  }
  paths_[r].clear();
  registered_[r] = false;
}

std::vector<int> ReservationTable::occupants(Cell c, int t) const {
  std::vector<int> out;
  if (region_.contains(c)) for_each_occupant(region_.index(c), t, [&](int r) { out.push_back(r); });
  return out;
}

std::vector<int> ReservationTable::conflicts_of(const Path& p, int robot) const {
  std::vector<int> out;
  const int end = std::max(static_cast<int>(p.size()) - 1, horizon_) + 1;
  auto delta_of = [&](int j, int t) { return position(j, t) - position(j, t - 1); };
  for (int t = 0; t <= end; ++t) {
    const Cell c = position_at(p, t);
    if (!region_.contains(c)) continue;
    for_each_occupant(region_.index(c), t, [&](int j) {
      if (j != robot) out.push_back(j);
    });
    if (t == 0) continue;
    const Cell prev = position_at(p, t - 1);
    const Cell d = c - prev;
    for_each_occupant(region_.index(c), t - 1, [&](int j) {
      if (j != robot && delta_of(j, t) != d) out.push_back(j);
    });
    if (region_.contains(prev)) {
      for_each_occupant(region_.index(prev), t, [&](int j) {
        if (j != robot && delta_of(j, t) != d) out.push_back(j);
      });
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool operator==(const ReservationTable& a, const ReservationTable& b) {
  if (a.region_ != b.region_ || a.mode_ != b.mode_ || a.registered_ != b.registered_) return false;
  for (std::size_t r = 0; r < a.paths_.size(); ++r) {
    if (a.registered_[r] && a.paths_[r] != b.paths_[r]) return false;
  }
  // Compare occupancy over the common horizon, treating the shorter one as parked.
  const int h = std::max(a.horizon_, b.horizon_);
  for (int t = 0; t <= h; ++t) {
    for (std::size_t idx = 0; idx < a.area_; ++idx) {
      std::vector<int> oa;
      std::vector<int> ob;
      a.for_each_occupant(idx, t, [&](int r) { oa.push_back(r); });
      b.for_each_occupant(idx, t, [&](int r) { ob.push_back(r); });
      std::sort(oa.begin(), oa.end());
      std::sort(ob.begin(), ob.end());
      if (oa != ob) return false;
    }
  }
  return true;
}

Rect search_region(const Rect& box, const std::vector<Cell>& extra) {
  Rect r = box;
  for (Cell c : extra) r = r.including(c);
  return r.expanded(2);
}

namespace {

constexpr Cell kMoveDeltas[5] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}, {0, 0}};

// Other robots as seen by the search: forward time, or mirrored around the
// deadline for reversed searches.
struct TimeView {
  const ReservationTable& table;
  bool reversed;
  int frame;

  int actual(int t) const { return reversed ? std::max(frame - t, 0) : t; }

  template <class F>
  void occupants(std::size_t idx, int t, F&& f) const {
    table.for_each_occupant(idx, actual(t), f);
  }

  // Move of robot j between view times t and t + 1.
  Cell delta(int j, int t) const {
    return table.position(j, actual(t + 1)) - table.position(j, actual(t));
  }
};

struct Label {
  std::int64_t w;
  int f;
  int g;
  double r;
  std::uint32_t node;
  bool terminal;
};

struct LabelOrder {
  bool operator()(const Label& a, const Label& b) const {
    if (a.w != b.w) return a.w > b.w;
    if (a.f != b.f) return a.f > b.f;
    if (a.r != b.r) return a.r > b.r;
    if (a.g != b.g) return a.g < b.g;
    return a.node > b.node;
  }
};

// Reused between searches; stamps avoid clearing the arrays.
struct Workspace {
  std::vector<std::uint32_t> seen;
  std::vector<std::uint32_t> closed;
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> g;
  std::vector<std::int64_t> w;
  std::vector<double> r;
  std::uint32_t stamp = 0;

  void prepare(std::size_t nodes) {
    if (seen.size() < nodes) {
      seen.assign(nodes, 0);
      closed.assign(nodes, 0);
      parent.resize(nodes);
      g.resize(nodes);
      w.resize(nodes);
      r.resize(nodes);
      stamp = 0;
    }
    if (++stamp == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(closed.begin(), closed.end(), 0);
      stamp = 1;
    }
  }
};

thread_local Workspace workspace;

}  // namespace

SearchResult find_path(const ReservationTable& table, const Robot& robot, const SearchConfig& cfg,
                       const DistanceOracle& oracle) {
  const bool conflict = cfg.mode == SearchMode::Conflict;
  const bool reversed = cfg.direction == Direction::Reversed;
  if (conflict != (cfg.weights != nullptr)) {
    throw std::invalid_argument("conflict weights must be given exactly in conflict mode");
  }
  if ((conflict || reversed) && cfg.deadline >= kNoDeadline) {
    throw std::invalid_argument("reversed and conflict searches need a finite deadline");
  }
  if (table.is_registered(robot.id)) throw std::logic_error("searching robot is still registered");
  if (cfg.hold < 0) throw std::invalid_argument("hold must be non-negative");

  SearchResult res;
  const Rect& region = table.region();
  const std::size_t area = region.area();
  const Cell origin = reversed ? robot.target : robot.start;
  const Cell goal = reversed ? robot.start : robot.target;
  const Cell goal_of_forward = robot.target;
  if (!region.contains(origin) || !region.contains(goal)) {
    res.failure = "endpoint outside the search region";
    return res;
  }
  const TimeView view{table, reversed, cfg.deadline};
  const int deadline = cfg.deadline;
  // Latest arrival. Reversed holds are spent before the search starts.
  const int arrive_by = reversed ? deadline : deadline - cfg.hold;
  const int start_time = reversed ? cfg.hold : 0;
  if (start_time > deadline || arrive_by < 0) {
    res.failure = "hold exceeds deadline";
    return res;
  }
  // Forward feasible searches see a static world after the horizon, so
  // times beyond it collapse into one layer.
  const int tcap = (!conflict && !reversed) ? std::min(deadline, table.horizon() + 1) : deadline;
  const std::size_t layers = static_cast<std::size_t>(tcap) + 1;
  const std::size_t goal_idx = region.index(goal);
  auto weight_of = [&](int j) -> std::int64_t {
    return conflict ? (*cfg.weights)[static_cast<std::size_t>(j)] : kInfWeight;
  };

  // Feasible: earliest time from which nobody else ever stands on the goal.
  // Conflict: cost of every distinct robot meeting us while we hold the goal.
  int goal_free_from = 0;
  std::vector<std::int64_t> hold_cost;
  const int view_end = reversed ? deadline : table.horizon();
  if (!conflict) {
    bool parked_on_goal = false;
    if (!reversed) view.occupants(goal_idx, table.horizon(), [&](int) { parked_on_goal = true; });
    if (parked_on_goal) {
      res.failure = "goal permanently occupied";
      return res;
    }
    for (int t = view_end; t >= 0; --t) {
      bool occupied = false;
      view.occupants(goal_idx, t, [&](int) { occupied = true; });
      if (occupied) {
        goal_free_from = t + 1;
        break;
      }
    }
  } else {
    hold_cost.assign(static_cast<std::size_t>(deadline) + 1, 0);
    std::vector<char> counted(table.instance().size(), 0);
    std::int64_t acc = 0;
    auto count = [&](int j) {
      if (counted[static_cast<std::size_t>(j)]) return;
      counted[static_cast<std::size_t>(j)] = 1;
      acc = std::min<std::int64_t>(acc + weight_of(j), kInfWeight);
    };
    const int tail_end = reversed ? deadline : std::max(view_end, deadline + 1);
    for (int t = tail_end; t > deadline; --t) view.occupants(goal_idx, t, count);
    for (int t = deadline; t >= 0; --t) {
      hold_cost[static_cast<std::size_t>(t)] = acc;
      view.occupants(goal_idx, t, count);
    }
  }

  std::vector<float> cell_weight;
  if (cfg.tie_break == TieBreak::Random) {
    std::mt19937_64 rng(cfg.seed);
    cell_weight.resize(area);
    for (float& x : cell_weight) x = static_cast<float>(rng() >> 40) / static_cast<float>(1 << 24);
  }

  // Cost of moving from cell c (time t) to c2 (time t + 1); -1 if forbidden.
  auto transition = [&](std::size_t c, std::size_t c2, Cell d, int t) -> std::int64_t {
    if (table.blocked(c2)) return -1;
    std::int64_t cost = 0;
    bool forbidden = false;
    auto hit = [&](int j) {
      const std::int64_t wj = weight_of(j);
      if (wj >= kInfWeight) forbidden = true;
      cost += wj;
    };
    view.occupants(c2, t + 1, [&](int j) { hit(j); });
    if (forbidden) return -1;
    view.occupants(c2, t, [&](int j) {
      if (view.delta(j, t) != d) hit(j);
    });
    if (forbidden) return -1;
    if (d != Cell{0, 0}) {
      view.occupants(c, t + 1, [&](int j) {
        if (view.delta(j, t) != d) hit(j);
      });
    }
    return forbidden ? -1 : cost;
  };

  // Forced reversed holds at the origin.
  std::int64_t w0 = 0;
  const std::size_t origin_idx = region.index(origin);
  if (table.blocked(origin_idx)) {
    res.failure = "start is an obstacle";
    return res;
  }
  for (int t = 0; t < start_time; ++t) {
    const std::int64_t c = transition(origin_idx, origin_idx, {0, 0}, t);
    if (c < 0) {
      res.failure = "forced hold at target is blocked";
      return res;
    }
    w0 += c;
  }

  Workspace& ws = workspace;
  ws.prepare(layers * area);
  const std::uint32_t stamp = ws.stamp;
  std::priority_queue<Label, std::vector<Label>, LabelOrder> open;
  auto node_of = [&](std::size_t idx, int t) {
    return static_cast<std::uint32_t>(static_cast<std::size_t>(std::min(t, tcap)) * area + idx);
  };

  const int h0 = oracle.query(origin);
  if (!is_finite(h0)) {
    res.failure = "goal unreachable";
    return res;
  }
  {
    const std::uint32_t n0 = node_of(origin_idx, start_time);
    ws.seen[n0] = stamp;
    ws.parent[n0] = -1;
    ws.g[n0] = start_time;
    ws.w[n0] = w0;
    ws.r[n0] = 0.0;
    open.push({conflict ? w0 : 0, start_time + h0, start_time, 0.0, n0, false});
  }

  std::int64_t found_node = -1;
  while (!open.empty()) {
    const Label cur = open.top();
    open.pop();
    const std::size_t idx = cur.node % area;
    if (cur.terminal) {
      found_node = cur.node;
      res.conflict_weight = cur.w;
      res.arrival = cur.g;
      break;
    }
    if (ws.closed[cur.node] == stamp) continue;
    if (ws.g[cur.node] != cur.g || (conflict && ws.w[cur.node] != cur.w)) continue;
    ws.closed[cur.node] = stamp;
    if (++res.expansions > cfg.expansion_budget) {
      res.failure = "expansion budget exhausted";
      return res;
    }
    res.closest = std::min(res.closest, cur.f - cur.g);

    if (idx == goal_idx && cur.g <= arrive_by) {
      if (!conflict && cur.g >= goal_free_from) {
        found_node = cur.node;
        res.arrival = cur.g;
        break;
      }
      if (conflict) {
        const std::int64_t total = cur.w + hold_cost[static_cast<std::size_t>(cur.g)];
        if (total < kInfWeight) open.push({total, cur.g, cur.g, cur.r, cur.node, true});
      }
    }

    const int t2 = cur.g + 1;
    if (t2 > deadline) continue;
    const Cell here = region.cell(idx);
    for (Cell d : kMoveDeltas) {
      const Cell nxt = here + d;
      if (!region.contains(nxt)) continue;
      const std::size_t idx2 = region.index(nxt);
      const int h = oracle.query(nxt);
      if (!is_finite(h) || t2 + h > arrive_by) continue;
      const std::int64_t cost = transition(idx, idx2, d, cur.g);
      if (cost < 0) continue;
      const std::uint32_t n2 = node_of(idx2, t2);
      if (ws.closed[n2] == stamp) continue;
      const std::int64_t w2 = cur.w + cost;
      const double r2 = cell_weight.empty() ? 0.0 : cur.r + cell_weight[idx2];
      if (ws.seen[n2] == stamp) {
        const bool better = conflict ? (w2 < ws.w[n2] || (w2 == ws.w[n2] && r2 < ws.r[n2]))
                                     : (t2 < ws.g[n2] || (t2 == ws.g[n2] && r2 < ws.r[n2]));
        if (!better) continue;
      }
      ws.seen[n2] = stamp;
      ws.parent[n2] = static_cast<std::int32_t>(cur.node);
      ws.g[n2] = t2;
      ws.w[n2] = w2;
      ws.r[n2] = r2;
      open.push({conflict ? w2 : 0, t2 + h, t2, r2, n2, false});
    }
  }

  if (found_node < 0) {
    if (res.failure.empty()) res.failure = "no path within the deadline";
    return res;
  }

  Path walk;
  for (std::int64_t n = found_node; n >= 0; n = ws.parent[static_cast<std::size_t>(n)]) {
    walk.push_back(region.cell(static_cast<std::size_t>(n) % area));
  }
  for (int t = 0; t < start_time; ++t) walk.push_back(origin);
  std::reverse(walk.begin(), walk.end());
  res.found = true;
  if (!reversed) {
    res.path = std::move(walk);
  } else {
    walk.resize(static_cast<std::size_t>(deadline) + 1, walk.back());
    res.path.assign(walk.rbegin(), walk.rend());
    res.arrival = 0;
    for (std::size_t t = 0; t < res.path.size(); ++t) {
      if (res.path[t] != goal_of_forward) res.arrival = static_cast<int>(t) + 1;
    }
  }
  return res;
}

}  // namespace cmp
