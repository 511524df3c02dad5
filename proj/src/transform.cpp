#include "cmp/transform.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmp {

std::string to_string(Transform t) {
  switch (t) {
    case Transform::Rot90: return "rot90";
    case Transform::Rot180: return "rot180";
    case Transform::Rot270: return "rot270";
    case Transform::Reverse: return "reverse";
  }
  return "?";
}

Transform parse_transform(const std::string& name) {
  for (Transform t : {Transform::Rot90, Transform::Rot180, Transform::Rot270, Transform::Reverse}) {
    if (to_string(t) == name) return t;
  }
  throw std::invalid_argument("unknown transform '" + name + "'");
}

Cell rotate90(Cell c) { return {-c.y, c.x}; }

namespace {

int quarter_turns(Transform t) {
  switch (t) {
    case Transform::Rot90: return 1;
    case Transform::Rot180: return 2;
    case Transform::Rot270: return 3;
    case Transform::Reverse: return 0;
  }
  return 0;
}

Cell turn(Cell c, int k) {
  for (int i = 0; i < k; ++i) c = rotate90(c);
  return c;
}

}  // namespace

Instance apply_transform(const Instance& inst, Transform t) {
  std::vector<Cell> obstacles, starts, targets;
  const int k = quarter_turns(t);
  for (Cell o : inst.obstacles()) obstacles.push_back(turn(o, k));
  for (const Robot& r : inst.robots()) {
    starts.push_back(turn(t == Transform::Reverse ? r.target : r.start, k));
    targets.push_back(turn(t == Transform::Reverse ? r.start : r.target, k));
  }
  return make_instance(inst.name(), obstacles, starts, targets);
}

Solution apply_transform(const Solution& s, Transform t) {
  Solution out = s;
  const int k = quarter_turns(t);
  for (Path& p : out.paths) {
    if (t == Transform::Reverse) std::reverse(p.begin(), p.end());
    for (Cell& c : p) c = turn(c, k);
  }
  return out;
}

Transform inverse(Transform t) {
  switch (t) {
    case Transform::Rot90: return Transform::Rot270;
    case Transform::Rot270: return Transform::Rot90;
    default: return t;
  }
}

}  // namespace cmp
