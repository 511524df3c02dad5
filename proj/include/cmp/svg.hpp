#pragma once

#include <string>

#include "cmp/core.hpp"

namespace cmp {

enum class ColorBy { Start, Target };

struct SvgOptions {
  ColorBy color_by = ColorBy::Start;
  int cell = 20;               // pixels per grid cell
  double step_seconds = 0.4;   // animation time per step
};

/// Animated SVG: obstacles as black squares, one rainbow-colored square per
/// robot moving through its path (SMIL). A makespan-0 solution renders as
/// a single still frame. Throws ValidationError for infeasible solutions.
std::string render_svg(const Instance& inst, const Solution& s, const SvgOptions& opt = {});

}  // namespace cmp
