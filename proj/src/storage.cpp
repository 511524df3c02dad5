#include "cmp/storage.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cmp/validate.hpp"

namespace cmp {

std::string to_string(StorageKind kind) {
  switch (kind) {
    case StorageKind::Cross: return "cross";
    case StorageKind::Cootie: return "cootie";
    case StorageKind::Dichotomy: return "dichotomy";
    case StorageKind::Escape: return "escape";
  }
  return "?";
}

StorageKind parse_storage_kind(const std::string& name) {
  for (StorageKind k :
       {StorageKind::Cross, StorageKind::Cootie, StorageKind::Dichotomy, StorageKind::Escape}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown storage strategy '" + name + "'");
}

int default_depth(StorageKind kind) {
  switch (kind) {
    case StorageKind::Cross:
    case StorageKind::Cootie: return 2;
    case StorageKind::Dichotomy: return 3;
    case StorageKind::Escape: return 4;
  }
  return 2;
}

std::optional<Cell> trapped_storage_cell(const Instance& inst, const Rect& box,
                                         const std::vector<Cell>& cells) {
  const Rect region = search_region(box, cells);
  std::vector<std::uint8_t> in_net(region.area(), 0);
  for (Cell c : cells) in_net[region.index(c)] = 1;
  std::vector<std::uint32_t> seen(region.area(), 0);
  std::uint32_t stamp = 0;
  std::deque<Cell> queue;
  for (Cell p : cells) {
    ++stamp;
    queue.assign(1, p);
    seen[region.index(p)] = stamp;
    bool escaped = false;
    while (!queue.empty() && !escaped) {
      const Cell c = queue.front();
      queue.pop_front();
      for (Move mv : {Move::North, Move::South, Move::East, Move::West}) {
        const Cell nb = apply_move(c, mv);
        if (!region.contains(nb) || inst.is_obstacle(nb)) continue;
        const std::size_t i = region.index(nb);
        if (in_net[i] || seen[i] == stamp) continue;
        if (box.contains(nb)) {
          escaped = true;
          break;
        }
        seen[i] = stamp;
        queue.push_back(nb);
      }
    }
    if (!escaped) return p;
  }
  return std::nullopt;
}

namespace {

std::vector<int> ordered_ids(std::size_t n, const StorageOptions& opt) {
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  if (opt.shuffle_ties) {
    std::mt19937_64 rng(opt.seed);
    std::shuffle(ids.begin(), ids.end(), rng);
  }
  return ids;
}

int floor_div2(int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }

}  // namespace

std::vector<int> start_depth_order(const Instance& inst, const DepthField& depth,
                                   const StorageOptions& opt) {
  std::vector<int> ids = ordered_ids(inst.size(), opt);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    return depth.at(inst.robot(static_cast<std::size_t>(a)).start) <
           depth.at(inst.robot(static_cast<std::size_t>(b)).start);
  });
  return ids;
}

std::vector<int> target_depth_order(const Instance& inst, const DepthField& depth,
                                    const StorageOptions& opt) {
  std::vector<int> ids = ordered_ids(inst.size(), opt);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    return depth.at(inst.robot(static_cast<std::size_t>(a)).target) >
           depth.at(inst.robot(static_cast<std::size_t>(b)).target);
  });
  return ids;
}

// ---------------------------------------------------------------- Cross

namespace {

// Min-cost assignment of rows to distinct columns (rows <= cols), O(n^2 m).
std::vector<int> hungarian(const std::vector<std::vector<std::int64_t>>& cost) {
  const std::size_t n = cost.size();
  const std::size_t m = cost.front().size();
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

bool is_even(int v) { return (v % 2 + 2) % 2 == 0; }

}  // namespace

StoragePlan build_cross(const Instance& inst, const BoundingBox& box, const OracleCache& oracles,
                        const StorageOptions& opt) {
  const Rect& r = box.rect;
  const std::size_t n = inst.size();
  StoragePlan out;
  out.network.kind = StorageKind::Cross;
  std::vector<Cell>& cells = out.network.cells;
  for (int k = 1; cells.size() < n; ++k) {
    for (int x = r.lo.x; x <= r.hi.x; ++x) {
      if (!is_even(x)) continue;
      cells.push_back({x, r.hi.y + k});
      cells.push_back({x, r.lo.y - k});
    }
    for (int y = r.lo.y; y <= r.hi.y; ++y) {
      if (!is_even(y)) continue;
      cells.push_back({r.hi.x + k, y});
      cells.push_back({r.lo.x - k, y});
    }
  }

  // Cost of parking robot i at cell j: dist(start, s) + dist(s, target).
  auto cost = [&](std::size_t i, std::size_t j) -> std::int64_t {
    const Robot& rb = inst.robot(i);
    return static_cast<std::int64_t>(oracles.distance(cells[j], rb.start)) +
           oracles.distance(cells[j], rb.target);
  };
  out.network.assignment.assign(n, Cell{});
  if (opt.matching == Matching::Exact) {
    std::vector<std::vector<std::int64_t>> matrix(n, std::vector<std::int64_t>(cells.size()));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < cells.size(); ++j) matrix[i][j] = cost(i, j);
    }
    const std::vector<int> match = hungarian(matrix);
    for (std::size_t i = 0; i < n; ++i) {
      out.network.assignment[i] = cells[static_cast<std::size_t>(match[i])];
    }
  } else {
    std::vector<int> ids = ordered_ids(n, opt);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
      const Robot& ra = inst.robot(static_cast<std::size_t>(a));
      const Robot& rb = inst.robot(static_cast<std::size_t>(b));
      return oracles.distance(ra.start, ra.target) > oracles.distance(rb.start, rb.target);
    });
    std::vector<char> taken(cells.size(), 0);
    for (int id : ids) {
      const auto i = static_cast<std::size_t>(id);
      std::size_t best = cells.size();
      std::int64_t best_cost = 0;
      for (std::size_t j = 0; j < cells.size(); ++j) {
        if (taken[j]) continue;
        const std::int64_t c = cost(i, j);
        if (best == cells.size() || c < best_cost) {
          best = j;
          best_cost = c;
        }
      }
      taken[best] = 1;
      out.network.assignment[i] = cells[best];
    }
  }
  const DepthField depth = compute_depth(inst, box);
  out.plan.phase1 = start_depth_order(inst, depth, opt);
  out.plan.phase2 = target_depth_order(inst, depth, opt);
  return out;
}

// ---------------------------------------------------------------- Cootie

namespace {

// j-th storage slot offset beyond a side on the two-of-three lattice:
// 2, 3, 5, 6, 8, 9, ... (offset 1 and every third column stay free).
int lattice_offset(int j) { return 2 + 3 * (j / 2) + (j % 2); }

// Straight path from `from` moving `d` each step until `to`, padded to `len`.
Path straight_path(Cell from, Cell to, Cell d, int len) {
  Path p{from};
  while (p.back() != to) p.push_back(p.back() + d);
  p.resize(static_cast<std::size_t>(len) + 1, to);
  return p;
}

}  // namespace

StoragePlan build_cootie(const Instance& inst, const BoundingBox& box, const StorageOptions& opt) {
  const Rect& r = box.rect;
  const std::size_t n = inst.size();
  enum Side { kRight, kLeft, kUp, kDown };
  std::vector<Side> side(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Cell s = inst.robot(i).start;
    const int dr = r.hi.x - s.x;
    const int dl = s.x - r.lo.x;
    const int du = r.hi.y - s.y;
    const int dd = s.y - r.lo.y;
    if (dr <= dl && dr <= du && dr <= dd) {
      side[i] = kRight;
    } else if (dl <= du && dl <= dd) {
      side[i] = kLeft;
    } else if (du <= dd) {
      side[i] = kUp;
    } else {
      side[i] = kDown;
    }
  }

  // Robots grouped per line (row for left/right, column for up/down). Slots
  // are handed out from the box outwards, so the order along a line is kept.
  StoragePlan out;
  out.network.kind = StorageKind::Cootie;
  out.network.assignment.assign(n, Cell{});
  std::vector<Cell> dir(n);
  for (Side sd : {kRight, kLeft, kUp, kDown}) {
    std::vector<int> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if (side[i] == sd) ids.push_back(static_cast<int>(i));
    }
    const bool horizontal = sd == kRight || sd == kLeft;
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      const Cell ca = inst.robot(static_cast<std::size_t>(a)).start;
      const Cell cb = inst.robot(static_cast<std::size_t>(b)).start;
      const int la = horizontal ? ca.y : ca.x;
      const int lb = horizontal ? cb.y : cb.x;
      if (la != lb) return la < lb;
      // Farthest from the side first.
      switch (sd) {
        case kRight: return ca.x < cb.x;
        case kLeft: return ca.x > cb.x;
        case kUp: return ca.y < cb.y;
        case kDown: return ca.y > cb.y;
      }
      return false;
    });
    int line = std::numeric_limits<int>::min();
    int j = 0;
    for (int id : ids) {
      const auto i = static_cast<std::size_t>(id);
      const Cell s = inst.robot(i).start;
      const int l = horizontal ? s.y : s.x;
      if (l != line) {
        line = l;
        j = 0;
      }
      const int off = lattice_offset(j++);
      Cell slot;
      switch (sd) {
        case kRight: slot = {r.hi.x + off, s.y}; dir[i] = {1, 0}; break;
        case kLeft: slot = {r.lo.x - off, s.y}; dir[i] = {-1, 0}; break;
        case kUp: slot = {s.x, r.hi.y + off}; dir[i] = {0, 1}; break;
        case kDown: slot = {s.x, r.lo.y - off}; dir[i] = {0, -1}; break;
      }
      out.network.assignment[i] = slot;
    }
  }
  out.network.cells = out.network.assignment;

  const DepthField depth = compute_depth(inst, box);
  out.plan.phase1 = start_depth_order(inst, depth, opt);
  out.plan.phase2 = target_depth_order(inst, depth, opt);
  if (!inst.has_obstacles()) {
    int len = 0;
    for (std::size_t i = 0; i < n; ++i) {
      len = std::max(len, l1(inst.robot(i).start, out.network.assignment[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.plan.scripted.push_back(
          straight_path(inst.robot(i).start, out.network.assignment[i], dir[i], len));
    }
  }
  return out;
}

// ---------------------------------------------------------------- Dichotomy

StoragePlan build_dichotomy(const Instance& inst, const BoundingBox& box, const StorageOptions& opt) {
  if (inst.has_obstacles()) {
    throw UnsupportedInstance("dichotomy storage only works for instances without obstacles");
  }
  const Rect& r = box.rect;
  const std::size_t n = inst.size();
  const int cx = floor_div2(r.lo.x + r.hi.x);
  const int cy = floor_div2(r.lo.y + r.hi.y);
  std::vector<bool> right(n);
  std::vector<Cell> mid(n);  // after the vertical spreading
  int t1 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Robot& rb = inst.robot(i);
    right[i] = rb.target.x - cx >= 0;
    const int ry = rb.start.y - cy;
    const int k = right[i] ? 1 : 0;
    const int ny = ry >= 0 ? 2 * ry + k : 2 * ry - k;
    mid[i] = {rb.start.x, cy + ny};
    t1 = std::max(t1, std::abs(ny - ry));
  }

  // Horizontal spreading per row. Rows crossing the box leave through the
  // side of their robots' targets; rows beyond it only make room at x = cx.
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    const Cell ca = mid[static_cast<std::size_t>(a)];
    const Cell cb = mid[static_cast<std::size_t>(b)];
    return ca.y != cb.y ? ca.y < cb.y : ca.x < cb.x;
  });
  std::vector<Cell> final_cell(n);
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi < n && mid[static_cast<std::size_t>(ids[hi])].y == mid[static_cast<std::size_t>(ids[lo])].y) {
      ++hi;
    }
    const int y = mid[static_cast<std::size_t>(ids[lo])].y;
    const bool inside = y >= r.lo.y && y <= r.hi.y;
    const bool row_right = right[static_cast<std::size_t>(ids[lo])];
    const std::size_t count = hi - lo;
    if (row_right) {
      int prev = cx;
      for (std::size_t k = 0; k < count; ++k) {
        const auto i = static_cast<std::size_t>(ids[lo + k]);
        const int x = inside ? r.hi.x + 1 + static_cast<int>(k) : std::max(mid[i].x, prev + 1);
        final_cell[i] = {x, y};
        prev = x;
      }
    } else {
      int prev = cx;
      for (std::size_t k = count; k-- > 0;) {
        const auto i = static_cast<std::size_t>(ids[lo + k]);
        const int x = inside ? r.lo.x - 1 - static_cast<int>(count - 1 - k)
                             : std::min(mid[i].x, prev - 1);
        final_cell[i] = {x, y};
        prev = x;
      }
    }
    lo = hi;
  }
  int t2 = 0;
  for (std::size_t i = 0; i < n; ++i) t2 = std::max(t2, std::abs(final_cell[i].x - mid[i].x));

  StoragePlan out;
  out.network.kind = StorageKind::Dichotomy;
  out.network.assignment = final_cell;
  out.network.cells = final_cell;
  for (std::size_t i = 0; i < n; ++i) {
    const Cell s = inst.robot(i).start;
    const Cell dv{0, mid[i].y >= s.y ? 1 : -1};
    Path p = straight_path(s, mid[i], dv, t1);
    const Cell dh{final_cell[i].x >= mid[i].x ? 1 : -1, 0};
    const Path h = straight_path(mid[i], final_cell[i], dh, t2);
    p.insert(p.end(), h.begin() + 1, h.end());
    out.plan.scripted.push_back(std::move(p));
  }
  const DepthField depth = compute_depth(inst, box);
  out.plan.phase1 = start_depth_order(inst, depth, opt);
  std::vector<int> order = ordered_ids(n, opt);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(inst.robot(static_cast<std::size_t>(a)).target.x - cx) <
           std::abs(inst.robot(static_cast<std::size_t>(b)).target.x - cx);
  });
  out.plan.phase2 = std::move(order);
  return out;
}

// ---------------------------------------------------------------- two phases

namespace {

std::string robot_str(const Robot& r) {
  return "robot " + std::to_string(r.id) + " (" + std::to_string(r.start.x) + "," +
         std::to_string(r.start.y) + ")->(" + std::to_string(r.target.x) + "," +
         std::to_string(r.target.y) + ")";
}

Solution collect(const ReservationTable& table, std::size_t n, const std::string& name) {
  Solution s{name, {}};
  int m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, static_cast<int>(table.path(static_cast<int>(i)).size()) - 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Path p = table.path(static_cast<int>(i));
    p.resize(static_cast<std::size_t>(m) + 1, p.back());
    s.paths.push_back(std::move(p));
  }
  return s;
}

}  // namespace

TwoPhaseResult run_two_phase(const Instance& inst, const BoundingBox& box, const StoragePlan& plan,
                             const OracleCache& oracles, const SearchConfig& search) {
  const std::size_t n = inst.size();
  const StorageNetwork& net = plan.network;
  if (net.assignment.size() != n) throw std::invalid_argument("storage assignment size mismatch");
  std::vector<Cell> extra = net.cells;
  for (const Path& p : plan.plan.scripted) extra.insert(extra.end(), p.begin(), p.end());
  const Rect region = search_region(box.rect, extra);
  ReservationTable table(inst, region, TableMode::Feasible);

  auto budget_for = [&](const ReservationTable& t) {
    return std::max(search.expansion_budget,
                    region.area() * static_cast<std::size_t>(t.horizon() + 3));
  };

  TwoPhaseResult res;
  if (!plan.plan.scripted.empty()) {
    std::vector<Cell> starts, parks;
    for (std::size_t i = 0; i < n; ++i) {
      starts.push_back(inst.robot(i).start);
      parks.push_back(net.assignment[i]);
    }
    const Instance parked = make_instance(inst.name(), inst.obstacles(), starts, parks);
    Solution scripted{inst.name(), plan.plan.scripted};
    const ValidationReport rep = validate(parked, scripted);
    if (!rep.feasible) {
      throw InternalError("scripted storage phase is infeasible: " + describe(rep.violations.front()));
    }
    for (std::size_t i = 0; i < n; ++i) table.register_path(static_cast<int>(i), scripted.paths[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) table.register_path(static_cast<int>(i), {inst.robot(i).start});
    for (int id : plan.plan.phase1) {
      const Robot& rb = inst.robot(static_cast<std::size_t>(id));
      const Robot to_storage{id, rb.start, net.assignment[static_cast<std::size_t>(id)]};
      table.unregister_path(id);
      SearchConfig cfg = search;
      cfg.mode = SearchMode::Feasible;
      cfg.direction = Direction::Forward;
      cfg.deadline = kNoDeadline;
      cfg.expansion_budget = budget_for(table);
      const SearchResult r = find_path(table, to_storage, cfg, *oracles.get(to_storage.target));
      if (!r.found) {
        throw InternalError("storage phase search failed for " + robot_str(to_storage) + ": " +
                            r.failure + " after " + std::to_string(r.expansions) + " expansions");
      }
      table.register_path(id, r.path);
    }
  }
  res.phase1 = collect(table, n, inst.name());
  res.phase1_makespan = res.phase1.makespan();

  for (int id : plan.plan.phase2) {
    const Robot& rb = inst.robot(static_cast<std::size_t>(id));
    table.unregister_path(id);
    SearchConfig cfg = search;
    cfg.mode = SearchMode::Feasible;
    cfg.direction = Direction::Forward;
    cfg.deadline = kNoDeadline;
    cfg.expansion_budget = budget_for(table);
    const SearchResult r = find_path(table, rb, cfg, *oracles.get(rb.target));
    if (!r.found) {
      throw InternalError("target phase search failed for " + robot_str(rb) + ": " + r.failure +
                          " after " + std::to_string(r.expansions) + " expansions");
    }
    table.register_path(id, r.path);
  }
  res.solution = trim_solution(collect(table, n, inst.name()));
  return res;
}

TwoPhaseResult solve_with_storage(const Instance& inst, StorageKind kind, int b,
                                  const StorageOptions& opt, const SearchConfig& search) {
  const BoundingBox box = compute_bounding_box(inst, b > 0 ? b : default_depth(kind));
  const OracleCache oracles(inst, box);
  StoragePlan plan;
  switch (kind) {
    case StorageKind::Cross: plan = build_cross(inst, box, oracles, opt); break;
    case StorageKind::Cootie: plan = build_cootie(inst, box, opt); break;
    case StorageKind::Dichotomy: plan = build_dichotomy(inst, box, opt); break;
    case StorageKind::Escape: plan = build_escape(inst, box, opt); break;
  }
  return run_two_phase(inst, box, plan, oracles, search);
}

}  // namespace cmp
