#include "cmp/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cmp {

Move move_between(Cell from, Cell to) {
  const Cell d = to - from;
  for (Move mv : kAllMoves) {
    if (delta(mv) == d) return mv;
  }
  throw std::invalid_argument("cells (" + std::to_string(from.x) + "," + std::to_string(from.y) +
                              ") and (" + std::to_string(to.x) + "," + std::to_string(to.y) +
                              ") are not adjacent");
}

Instance::Instance(std::string name, std::vector<Cell> obstacles, std::vector<Robot> robots)
    : name_(std::move(name)), obstacles_(std::move(obstacles)), robots_(std::move(robots)) {
  std::sort(obstacles_.begin(), obstacles_.end());
  obstacles_.erase(std::unique(obstacles_.begin(), obstacles_.end()), obstacles_.end());
  obstacle_set_.reserve(obstacles_.size());
  obstacle_set_.insert(obstacles_.begin(), obstacles_.end());
}

namespace {

std::string cell_str(Cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

void check_coord(Cell c, const char* what, std::size_t i) {
  if (c.x < -kCoordLimit || c.x > kCoordLimit || c.y < -kCoordLimit || c.y > kCoordLimit) {
    throw ValidationError(std::string(what) + " " + std::to_string(i) + " " + cell_str(c) +
                          " is outside the supported coordinate range");
  }
}

}  // namespace

Instance make_instance(std::string name, std::vector<Cell> obstacles,
                       const std::vector<Cell>& starts, const std::vector<Cell>& targets) {
  if (starts.size() != targets.size()) {
    throw ValidationError("starts and targets differ in length (" + std::to_string(starts.size()) +
                          " vs " + std::to_string(targets.size()) + ")");
  }
  if (starts.empty()) throw ValidationError("instance has no robots");
  for (std::size_t i = 0; i < obstacles.size(); ++i) check_coord(obstacles[i], "obstacle", i);

  CellSet obstacle_set(obstacles.begin(), obstacles.end());
  CellSet seen_starts;
  CellSet seen_targets;
  std::vector<Robot> robots;
  robots.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    check_coord(starts[i], "start", i);
    check_coord(targets[i], "target", i);
    if (!seen_starts.insert(starts[i]).second) {
      throw ValidationError("duplicate start " + cell_str(starts[i]) + " at robot " +
                            std::to_string(i));
    }
    if (!seen_targets.insert(targets[i]).second) {
      throw ValidationError("duplicate target " + cell_str(targets[i]) + " at robot " +
                            std::to_string(i));
    }
    if (obstacle_set.contains(starts[i])) {
      throw ValidationError("start of robot " + std::to_string(i) + " " + cell_str(starts[i]) +
                            " is an obstacle");
    }
    if (obstacle_set.contains(targets[i])) {
      throw ValidationError("target of robot " + std::to_string(i) + " " + cell_str(targets[i]) +
                            " is an obstacle");
    }
    robots.push_back({static_cast<int>(i), starts[i], targets[i]});
  }
  return Instance(std::move(name), std::move(obstacles), std::move(robots));
}

int Solution::makespan() const {
  if (paths.empty() || paths.front().empty()) return 0;
  return static_cast<int>(paths.front().size()) - 1;
}

Solution pad_solution(const Solution& s, int m_new) {
  const int m = s.makespan();
  if (m_new < m) {
    throw std::invalid_argument("cannot pad makespan " + std::to_string(m) + " down to " +
                                std::to_string(m_new));
  }
  Solution out = s;
  for (Path& p : out.paths) {
    if (p.empty()) continue;
    p.resize(static_cast<std::size_t>(m_new) + 1, p.back());
  }
  return out;
}

int effective_makespan(const Solution& s) {
  int last = 0;
  for (const Path& p : s.paths) {
    for (int t = static_cast<int>(p.size()) - 1; t > last; --t) {
      if (p[static_cast<std::size_t>(t)] != p[static_cast<std::size_t>(t) - 1]) {
        last = t;
        break;
      }
    }
  }
  return last;
}

Solution trim_solution(const Solution& s) {
  const int m = effective_makespan(s);
  Solution out = s;
  for (Path& p : out.paths) {
    if (static_cast<int>(p.size()) > m + 1) p.resize(static_cast<std::size_t>(m) + 1);
  }
  return pad_solution(out, m);
}

Path stationary_path(Cell c, int m) { return Path(static_cast<std::size_t>(m) + 1, c); }

}  // namespace cmp
