#include "cmp/svg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cmp/errors.hpp"
#include "cmp/validate.hpp"

namespace cmp {

std::string render_svg(const Instance& inst, const Solution& s, const SvgOptions& opt) {
  const ValidationReport rep = validate(inst, s);
  if (!rep.feasible) {
    throw ValidationError("refusing to render an infeasible solution: " +
                          describe(rep.violations.front()));
  }
  Cell lo{0, 0}, hi{0, 0};
  bool first = true;
  auto include = [&](Cell c) {
    if (first) {
      lo = hi = c;
      first = false;
    }
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
  };
  for (Cell o : inst.obstacles()) include(o);
  for (const Path& p : s.paths) {
    for (Cell c : p) include(c);
  }
  lo = lo - Cell{1, 1};
  hi = hi + Cell{1, 1};
  const int cell = opt.cell;
  const int width = (hi.x - lo.x + 1) * cell;
  const int height = (hi.y - lo.y + 1) * cell;
  auto px = [&](Cell c) { return (c.x - lo.x) * cell; };
  auto py = [&](Cell c) { return (hi.y - c.y) * cell; };

  // Hue follows the rank of each robot's start (or target) in row-major order.
  const std::size_t n = inst.size();
  std::vector<std::size_t> rank_of(n);
  {
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    auto key = [&](std::size_t i) {
      const Robot& r = inst.robot(i);
      const Cell c = opt.color_by == ColorBy::Start ? r.start : r.target;
      return std::pair{-c.y, c.x};
    };
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (std::size_t k = 0; k < n; ++k) rank_of[ids[k]] = k;
  }

  const int m = s.makespan();
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  for (Cell o : inst.obstacles()) {
    out << "<rect class=\"obstacle\" x=\"" << px(o) << "\" y=\"" << py(o) << "\" width=\"" << cell
        << "\" height=\"" << cell << "\" fill=\"black\"/>\n";
  }
  const double dur = std::max(1, m) * opt.step_seconds;
  for (std::size_t i = 0; i < n; ++i) {
    const Path& p = s.paths[i];
    const int hue = n > 1 ? static_cast<int>(300 * rank_of[i] / (n - 1)) : 0;
    out << "<rect class=\"robot\" id=\"r" << i << "\" x=\"" << px(p[0]) << "\" y=\"" << py(p[0])
        << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"hsl(" << hue
        << ",80%,50%)\" stroke=\"black\" stroke-width=\"1\"";
    if (m == 0) {
      out << "/>\n";
      continue;
    }
    out << ">\n";
    for (const char* attr : {"x", "y"}) {
      out << "  <animate attributeName=\"" << attr << "\" dur=\"" << dur
          << "s\" repeatCount=\"indefinite\" values=\"";
      for (std::size_t t = 0; t < p.size(); ++t) {
        out << (t ? ";" : "") << (attr[0] == 'x' ? px(p[t]) : py(p[t]));
      }
      out << "\"/>\n";
    }
    out << "</rect>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cmp
