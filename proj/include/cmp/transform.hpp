#pragma once

#include <string>

#include "cmp/core.hpp"

namespace cmp {

/// Symmetries that preserve feasibility and makespan.
enum class Transform { Rot90, Rot180, Rot270, Reverse };

std::string to_string(Transform t);
/// Accepts "rot90", "rot180", "rot270", "reverse"; throws std::invalid_argument.
Transform parse_transform(const std::string& name);

/// Counter-clockwise quarter turn: (x, y) -> (-y, x).
Cell rotate90(Cell c);

/// Reverse swaps starts and targets. The instance name is kept.
Instance apply_transform(const Instance& inst, Transform t);
/// Reverse plays every path backwards.
Solution apply_transform(const Solution& s, Transform t);

/// The transform undoing `t`.
Transform inverse(Transform t);

}  // namespace cmp
