#include <algorithm>
#include <deque>

#include "cmp/errors.hpp"
#include "cmp/storage.hpp"

namespace cmp {

namespace {

constexpr Move kSweepMoves[] = {Move::East, Move::West, Move::North, Move::South};

int mod3(int v) { return (v % 3 + 3) % 3; }

// Cells between `front` (exclusive) and the first cell outside `r`, walking d.
int ray_length(const Rect& r, Cell front, Cell d) {
  int len = 0;
  for (Cell c = front + d; r.contains(c); c = c + d) ++len;
  return len;
}

struct Candidate {
  int area = 0;
  int ray = 0;
  Rect cells;
  Move direction = Move::East;
};

class Layering {
 public:
  Layering(const Instance& inst, const Rect& r) : inst_(inst), r_(r), robot_(r.area(), -1) {
    for (const Robot& rb : inst.robots()) robot_[r.index(rb.start)] = rb.id;
    remaining_ = inst.size();
  }

  EscapeLayering run() {
    EscapeLayering out;
    out.layer_of.assign(inst_.size(), 0);
    while (remaining_ > 0) {
      const int layer = out.layers + 1;
      claimed_.assign(r_.area(), 0);
      in_layer_.assign(r_.area(), 0);
      std::vector<std::size_t> members;
      while (auto cand = best_block()) {
        out.blocks.push_back({cand->cells, cand->direction, layer});
        const Cell d = delta(cand->direction);
        for (int y = cand->cells.lo.y; y <= cand->cells.hi.y; ++y) {
          for (int x = cand->cells.lo.x; x <= cand->cells.hi.x; ++x) {
            const std::size_t i = r_.index({x, y});
            in_layer_[i] = 1;
            members.push_back(i);
            out.layer_of[static_cast<std::size_t>(robot_[i])] = layer;
            for (Cell c = Cell{x, y} + d; r_.contains(c); c = c + d) {
              if (robot_[r_.index(c)] < 0) claimed_[r_.index(c)] = 1;
            }
          }
        }
      }
      if (members.empty()) break;
      out.layers = layer;
      for (std::size_t i : members) robot_[i] = -1;
      remaining_ -= members.size();
    }
    for (std::size_t i = 0; i < r_.area(); ++i) {
      if (robot_[i] >= 0) out.stranded.push_back(r_.cell(i));
    }
    return out;
  }

 private:
  bool traversable(std::size_t i) const {
    return robot_[i] < 0 && !claimed_[i] && !inst_.is_obstacle(r_.cell(i));
  }
  bool available(std::size_t i) const { return robot_[i] >= 0 && !in_layer_[i]; }

  // ok[i]: the straight ray from cell i in direction d leaves the box
  // through traversable cells only (i itself included).
  std::vector<char> ray_ok(Cell d) const {
    std::vector<char> ok(r_.area(), 0);
    // Visit cells nearest the exit side first.
    auto visit = [&](Cell c) {
      const Cell nx = c + d;
      const bool next_ok = !r_.contains(nx) || ok[r_.index(nx)];
      ok[r_.index(c)] = next_ok && traversable(r_.index(c));
    };
    if (d.x != 0) {
      for (int k = 0; k < r_.width(); ++k) {
        const int x = d.x > 0 ? r_.hi.x - k : r_.lo.x + k;
        for (int y = r_.lo.y; y <= r_.hi.y; ++y) visit({x, y});
      }
    } else {
      for (int k = 0; k < r_.height(); ++k) {
        const int y = d.y > 0 ? r_.hi.y - k : r_.lo.y + k;
        for (int x = r_.lo.x; x <= r_.hi.x; ++x) visit({x, y});
      }
    }
    return ok;
  }

  std::optional<Candidate> best_block() const {
    std::optional<Candidate> best;
    for (Move mv : kSweepMoves) {
      const Cell d = delta(mv);
      const Cell back{-d.x, -d.y};
      const std::vector<char> ok = ray_ok(d);
      const Cell across = d.x != 0 ? Cell{0, 1} : Cell{1, 0};
      const int lines = d.x != 0 ? r_.width() : r_.height();
      const int span = d.x != 0 ? r_.height() : r_.width();
      std::vector<int> h(static_cast<std::size_t>(span));
      for (int l = 0; l < lines; ++l) {
        const Cell base = d.x != 0 ? Cell{r_.lo.x + l, r_.lo.y} : Cell{r_.lo.x, r_.lo.y + l};
        for (int k = 0; k < span; ++k) {
          const Cell f{base.x + across.x * k, base.y + across.y * k};
          const Cell nx = f + d;
          const bool front = available(r_.index(f)) && (!r_.contains(nx) || ok[r_.index(nx)]);
          int run = 0;
          if (front) {
            for (Cell c = f; r_.contains(c) && available(r_.index(c)); c = c + back) ++run;
          }
          h[static_cast<std::size_t>(k)] = run;
        }
        const int ray = ray_length(r_, base, d);
        // Largest rectangle under the histogram.
        std::vector<int> stack;
        for (int k = 0; k <= span; ++k) {
          const int cur = k < span ? h[static_cast<std::size_t>(k)] : 0;
          while (!stack.empty() && h[static_cast<std::size_t>(stack.back())] >= cur) {
            const int height = h[static_cast<std::size_t>(stack.back())];
            stack.pop_back();
            const int left = stack.empty() ? 0 : stack.back() + 1;
            const int area = height * (k - left);
            if (area == 0) continue;
            const bool better = !best || area > best->area ||
                                (area == best->area && ray < best->ray);
            if (!better) continue;
            const Cell a{base.x + across.x * left, base.y + across.y * left};
            const Cell b{base.x + across.x * (k - 1), base.y + across.y * (k - 1)};
            const Cell tail{a.x + back.x * (height - 1), a.y + back.y * (height - 1)};
            Rect rect{{std::min({a.x, b.x, tail.x}), std::min({a.y, b.y, tail.y})},
                      {std::max({a.x, b.x, tail.x}), std::max({a.y, b.y, tail.y})}};
            best = Candidate{area, ray, rect, mv};
          }
          stack.push_back(k);
        }
      }
    }
    return best;
  }

  const Instance& inst_;
  Rect r_;
  std::vector<int> robot_;
  std::vector<char> claimed_;
  std::vector<char> in_layer_;
  std::size_t remaining_ = 0;
};

// Storage lattice: cells outside the box beyond the first ring whose
// coordinates are both nonzero mod 3, as many rings as needed for n robots.
std::vector<Cell> escape_slots(const Rect& r, std::size_t n, int& rings) {
  std::vector<Cell> cells;
  rings = 1;
  while (cells.size() < n) {
    ++rings;
    const Rect outer = r.expanded(rings);
    const Rect inner = r.expanded(rings - 1);
    for (int y = outer.lo.y; y <= outer.hi.y; ++y) {
      for (int x = outer.lo.x; x <= outer.hi.x; ++x) {
        const Cell c{x, y};
        if (inner.contains(c) || mod3(x) == 0 || mod3(y) == 0) continue;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

}  // namespace

EscapeLayering decompose_escape(const Instance& inst, const BoundingBox& box) {
  return Layering(inst, box.rect).run();
}

StoragePlan build_escape(const Instance& inst, const BoundingBox& box, const StorageOptions& opt,
                         bool strict) {
  const Rect& r = box.rect;
  const std::size_t n = inst.size();
  const EscapeLayering layering = decompose_escape(inst, box);
  if (strict && !layering.stranded.empty()) {
    std::string cells;
    for (Cell c : layering.stranded) {
      cells += " (" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
    }
    throw DecompositionError("escape layering leaves robots stranded at" + cells);
  }

  int rings = 0;
  StoragePlan out;
  out.network.kind = StorageKind::Escape;
  out.network.cells = escape_slots(r, n, rings);
  out.network.assignment.assign(n, Cell{});
  const Rect outer = r.expanded(rings + 1);
  std::vector<char> slot(outer.area(), 0);
  for (Cell c : out.network.cells) slot[outer.index(c)] = 1;

  std::vector<int> robot_at(r.area(), -1);
  for (const Robot& rb : inst.robots()) robot_at[r.index(rb.start)] = rb.id;

  // Exit order: by layer, block, then front-most robot first.
  std::vector<int> order;
  std::vector<Path> route(n);
  for (const EscapeBlock& b : layering.blocks) {
    const Cell d = delta(b.direction);
    std::vector<int> ids;
    for (int y = b.cells.lo.y; y <= b.cells.hi.y; ++y) {
      for (int x = b.cells.lo.x; x <= b.cells.hi.x; ++x) ids.push_back(robot_at[r.index({x, y})]);
    }
    std::sort(ids.begin(), ids.end(), [&](int a, int c) {
      const Cell pa = inst.robot(static_cast<std::size_t>(a)).start;
      const Cell pc = inst.robot(static_cast<std::size_t>(c)).start;
      const int ka = pa.x * d.x + pa.y * d.y;
      const int kc = pc.x * d.x + pc.y * d.y;
      return ka != kc ? ka > kc : a < c;
    });
    for (int id : ids) {
      Path& p = route[static_cast<std::size_t>(id)];
      p.push_back(inst.robot(static_cast<std::size_t>(id)).start);
      while (r.contains(p.back())) p.push_back(p.back() + d);
      order.push_back(id);
    }
  }

  // Nearest free slot from each exit cell through the corridors.
  std::vector<int> seen(outer.area(), -1);
  std::vector<std::size_t> parent(outer.area());
  for (int id : order) {
    Path& p = route[static_cast<std::size_t>(id)];
    const Cell exit = p.back();
    std::deque<Cell> queue{exit};
    seen[outer.index(exit)] = id;
    std::optional<Cell> found;
    while (!queue.empty() && !found) {
      const Cell c = queue.front();
      queue.pop_front();
      for (Move mv : {Move::North, Move::South, Move::East, Move::West}) {
        const Cell nb = apply_move(c, mv);
        if (!outer.contains(nb) || r.contains(nb)) continue;
        const std::size_t i = outer.index(nb);
        if (seen[i] == id) continue;
        seen[i] = id;
        parent[i] = outer.index(c);
        if (slot[i] == 1) {
          found = nb;
          break;
        }
        if (slot[i] == 0) queue.push_back(nb);
      }
    }
    Path tail;
    for (std::size_t i = outer.index(*found); outer.cell(i) != exit; i = parent[i]) {
      tail.push_back(outer.cell(i));
    }
    p.insert(p.end(), tail.rbegin(), tail.rend());
    slot[outer.index(*found)] = 2;
    out.network.assignment[static_cast<std::size_t>(id)] = *found;
  }

  const DepthField depth = compute_depth(inst, box);
  out.plan.phase1 = start_depth_order(inst, depth, opt);
  out.plan.phase2 = target_depth_order(inst, depth, opt);

  if (!layering.stranded.empty()) {
    for (Cell c : layering.stranded) {
      const auto id = static_cast<std::size_t>(robot_at[r.index(c)]);
      std::size_t best = out.network.cells.size();
      for (std::size_t j = 0; j < out.network.cells.size(); ++j) {
        if (slot[outer.index(out.network.cells[j])] != 1) continue;
        if (best == out.network.cells.size() ||
            l1(c, out.network.cells[j]) < l1(c, out.network.cells[best])) {
          best = j;
        }
      }
      out.network.assignment[id] = out.network.cells[best];
      slot[outer.index(out.network.cells[best])] = 2;
    }
    return out;
  }

  // Time-stepped run of the routes: a robot advances when its next cell is
  // free or vacated in the same direction; contested cells go to the robot
  // earlier in exit order.
  std::vector<int> rank(n);
  for (std::size_t k = 0; k < order.size(); ++k) rank[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
  std::vector<int> occ(outer.area(), -1);
  std::vector<std::size_t> step(n, 0);
  std::vector<Path> paths(n);
  for (std::size_t i = 0; i < n; ++i) {
    occ[outer.index(route[i][0])] = static_cast<int>(i);
    paths[i].push_back(route[i][0]);
  }
  std::size_t active = 0;
  for (std::size_t i = 0; i < n; ++i) active += route[i].size() > 1;
  const std::size_t step_cap = 4 * (outer.area() + n);
  std::vector<int> claim(outer.area(), -1);
  std::vector<char> moving(n, 0);
  for (std::size_t t = 0; active > 0; ++t) {
    if (t > step_cap) return out;
    std::vector<int> cand;
    for (std::size_t i = 0; i < n; ++i) {
      moving[i] = 0;
      if (step[i] + 1 >= route[i].size()) continue;
      const std::size_t want = outer.index(route[i][step[i] + 1]);
      const int cur = claim[want];
      if (cur < 0 || rank[i] < rank[static_cast<std::size_t>(cur)]) claim[want] = static_cast<int>(i);
      cand.push_back(static_cast<int>(i));
    }
    for (int i : cand) {
      const auto u = static_cast<std::size_t>(i);
      const std::size_t want = outer.index(route[u][step[u] + 1]);
      if (claim[want] == i) moving[u] = 1;
    }
    for (int i : cand) claim[outer.index(route[static_cast<std::size_t>(i)][step[static_cast<std::size_t>(i)] + 1])] = -1;
    // Greatest set of movers whose next cell is empty or vacated in line.
    for (bool changed = true; changed;) {
      changed = false;
      for (int i : cand) {
        const auto u = static_cast<std::size_t>(i);
        if (!moving[u]) continue;
        const Cell next = route[u][step[u] + 1];
        const int j = occ[outer.index(next)];
        if (j < 0) continue;
        const auto v = static_cast<std::size_t>(j);
        const Cell du = next - route[u][step[u]];
        const bool follows = moving[v] && route[v][step[v] + 1] - route[v][step[v]] == du;
        if (!follows) {
          moving[u] = 0;
          changed = true;
        }
      }
    }
    bool any = false;
    for (int i : cand) {
      const auto u = static_cast<std::size_t>(i);
      if (moving[u]) {
        occ[outer.index(route[u][step[u]])] = -1;
        any = true;
      }
    }
    if (!any) return out;
    for (int i : cand) {
      const auto u = static_cast<std::size_t>(i);
      if (!moving[u]) continue;
      ++step[u];
      occ[outer.index(route[u][step[u]])] = i;
      if (step[u] + 1 == route[u].size()) --active;
    }
    for (std::size_t i = 0; i < n; ++i) paths[i].push_back(route[i][step[i]]);
  }
  out.plan.scripted = std::move(paths);
  return out;
}

}  // namespace cmp
