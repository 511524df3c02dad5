#include "cmp/distance.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace cmp {

BoundingBox compute_bounding_box(const Instance& inst, int b) {
  if (b < 2) throw std::invalid_argument("depth parameter b must be at least 2");
  Cell lo{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
  Cell hi{std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
  auto grow = [&](Cell c) {
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
  };
  for (const Robot& r : inst.robots()) {
    grow(r.start);
    grow(r.target);
  }
  for (Cell o : inst.obstacles()) grow(o);
  const int margin = 1 + (b - 2);
  return {{{lo.x - margin, lo.y - margin}, {hi.x + margin, hi.y + margin}}, b};
}

namespace {

constexpr Cell kSteps[4] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}};

}  // namespace

DepthField compute_depth(const Instance& inst, const BoundingBox& box) {
  const Rect& r = box.rect;
  std::vector<int> depth(r.area(), kInfDistance);
  std::deque<Cell> queue;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const Cell c = r.cell(i);
    if (r.on_boundary(c) && !inst.is_obstacle(c)) {
      depth[i] = 1;
      queue.push_back(c);
    }
  }
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    const int d = depth[r.index(c)];
    for (Cell s : kSteps) {
      const Cell n = c + s;
      if (!r.contains(n) || inst.is_obstacle(n)) continue;
      int& dn = depth[r.index(n)];
      if (dn > d + 1) {
        dn = d + 1;
        queue.push_back(n);
      }
    }
  }
  for (Cell o : inst.obstacles()) {
    if (!r.contains(o)) continue;
    int best = kInfDistance;
    for (Cell s : kSteps) {
      const Cell n = o + s;
      if (r.contains(n) && !inst.is_obstacle(n)) best = std::min(best, depth[r.index(n)]);
    }
    depth[r.index(o)] = is_finite(best) ? best + 1 : kInfDistance;
  }
  return DepthField(r, std::move(depth));
}

std::vector<int> bfs_distances(const Instance& inst, const Rect& area, Cell source) {
  std::vector<int> dist(area.area(), kInfDistance);
  if (!area.contains(source) || inst.is_obstacle(source)) return dist;
  std::deque<Cell> queue{source};
  dist[area.index(source)] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    const int d = dist[area.index(c)];
    for (Cell s : kSteps) {
      const Cell n = c + s;
      if (!area.contains(n) || inst.is_obstacle(n)) continue;
      int& dn = dist[area.index(n)];
      if (dn == kInfDistance) {
        dn = d + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

DistanceOracle build_oracle(const Instance& inst, const BoundingBox& box, Cell target) {
  if (inst.is_obstacle(target)) throw std::invalid_argument("oracle target is an obstacle");
  DistanceOracle o;
  o.target_ = target;
  o.rect_ = box.rect.including(target);
  const Rect& r = o.rect_;
  const std::vector<int> dist = bfs_distances(inst, r, target);

  const int w = r.width();
  o.row_offset_.reserve(static_cast<std::size_t>(r.height()) + 1);
  o.row_offset_.push_back(0);
  for (int y = r.lo.y; y <= r.hi.y; ++y) {
    const std::size_t base = r.index({r.lo.x, y});
    for (int i = 0; i < w; ++i) {
      const int d = dist[base + static_cast<std::size_t>(i)];
      bool keep = i == 0 || i == w - 1 || !is_finite(d);
      if (!keep) {
        const int left = dist[base + static_cast<std::size_t>(i) - 1];
        const int right = dist[base + static_cast<std::size_t>(i) + 1];
        keep = !is_finite(left) || !is_finite(right) || 2 * d != left + right;
      }
      if (keep) o.points_.push_back({r.lo.x + i, d});
    }
    o.row_offset_.push_back(static_cast<std::uint32_t>(o.points_.size()));
  }
  return o;
}

std::size_t DistanceOracle::row_breakpoint_count(int y) const {
  if (y < rect_.lo.y || y > rect_.hi.y) return 0;
  const auto r = static_cast<std::size_t>(y - rect_.lo.y);
  return row_offset_[r + 1] - row_offset_[r];
}

std::vector<DistanceOracle::Breakpoint> DistanceOracle::row(int y) const {
  if (y < rect_.lo.y || y > rect_.hi.y) return {};
  const auto r = static_cast<std::size_t>(y - rect_.lo.y);
  return {points_.begin() + row_offset_[r], points_.begin() + row_offset_[r + 1]};
}

int DistanceOracle::query_inside(Cell p, std::size_t* comparisons) const {
  const auto r = static_cast<std::size_t>(p.y - rect_.lo.y);
  const Breakpoint* first = points_.data() + row_offset_[r];
  std::size_t lo = 0;
  std::size_t hi = row_offset_[r + 1] - row_offset_[r];
  std::size_t cmps = 0;
  // Largest stored x <= p.x; row ends are always stored so it exists.
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++cmps;
    if (first[mid].x <= p.x) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (comparisons != nullptr) *comparisons += cmps + 1;
  const Breakpoint& left = first[lo - 1];
  if (left.x == p.x) return left.dist;
  const Breakpoint& right = first[lo];
  const int slope = (right.dist - left.dist) / (right.x - left.x);
  return left.dist + slope * (p.x - left.x);
}

int DistanceOracle::query(Cell p, std::size_t* comparisons) const {
  if (rect_.contains(p)) return query_inside(p, comparisons);
  const Cell q = rect_.clamp(p);
  const int d = query_inside(q, comparisons);
  return is_finite(d) ? d + l1(p, q) : d;
}

std::shared_ptr<const DistanceOracle> OracleCache::get(Cell target) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(target); it != cache_.end()) return it->second;
  }
  auto built = std::make_shared<const DistanceOracle>(build_oracle(*inst_, box_, target));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(target, std::move(built));
  return it->second;
}

}  // namespace cmp
