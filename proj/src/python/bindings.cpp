#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmp/errors.hpp"
#include "cmp/io.hpp"
#include "cmp/solve.hpp"
#include "cmp/svg.hpp"
#include "cmp/transform.hpp"
#include "cmp/validate.hpp"

namespace py = pybind11;

namespace {

std::pair<int, int> to_py(cmp::Cell c) { return {c.x, c.y}; }

std::vector<std::pair<int, int>> to_py(const std::vector<cmp::Cell>& cells) {
  std::vector<std::pair<int, int>> out;
  out.reserve(cells.size());
  for (cmp::Cell c : cells) out.push_back(to_py(c));
  return out;
}

std::vector<cmp::Cell> from_py(const std::vector<std::pair<int, int>>& cells) {
  std::vector<cmp::Cell> out;
  out.reserve(cells.size());
  for (auto [x, y] : cells) out.push_back({x, y});
  return out;
}

py::dict report_dict(const cmp::ValidationReport& r) {
  py::list violations;
  for (const auto& v : r.violations) violations.append(cmp::describe(v));
  py::dict d;
  d["feasible"] = r.feasible;
  d["makespan"] = r.makespan;
  d["distance_sum"] = r.distance_sum;
  d["violations"] = violations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Grid motion planning: storage strategies, step planner, optimizers";

  auto base = py::register_exception<cmp::Error>(m, "Error", PyExc_ValueError);
  py::register_exception<cmp::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<cmp::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<cmp::UnsupportedInstance>(m, "UnsupportedInstance", base.ptr());
  py::register_exception<cmp::InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<cmp::SolverFailure>(m, "SolverFailure", base.ptr());
  py::register_exception<cmp::InternalError>(m, "InternalError", base.ptr());

  py::class_<cmp::Instance>(m, "Instance")
      .def(py::init([](std::string name, const std::vector<std::pair<int, int>>& obstacles,
                       const std::vector<std::pair<int, int>>& starts,
                       const std::vector<std::pair<int, int>>& targets) {
             return cmp::make_instance(std::move(name), from_py(obstacles), from_py(starts),
                                       from_py(targets));
           }),
           py::arg("name"), py::arg("obstacles"), py::arg("starts"), py::arg("targets"))
      .def_property_readonly("name", &cmp::Instance::name)
      .def_property_readonly("obstacles", [](const cmp::Instance& i) { return to_py(i.obstacles()); })
      .def_property_readonly("starts",
                             [](const cmp::Instance& i) {
                               std::vector<std::pair<int, int>> v;
                               for (const auto& r : i.robots()) v.push_back(to_py(r.start));
                               return v;
                             })
      .def_property_readonly("targets",
                             [](const cmp::Instance& i) {
                               std::vector<std::pair<int, int>> v;
                               for (const auto& r : i.robots()) v.push_back(to_py(r.target));
                               return v;
                             })
      .def("__len__", &cmp::Instance::size)
      .def("to_json", &cmp::write_instance)
      .def(py::self == py::self);

  py::class_<cmp::Solution>(m, "Solution")
      .def_readonly("instance_name", &cmp::Solution::instance_name)
      .def_property_readonly("makespan", &cmp::Solution::makespan)
      .def_property_readonly("paths",
                             [](const cmp::Solution& s) {
                               std::vector<std::vector<std::pair<int, int>>> out;
                               for (const auto& p : s.paths) out.push_back(to_py(p));
                               return out;
                             })
      .def("to_json", [](const cmp::Solution& s) { return cmp::write_solution(s); })
      .def(py::self == py::self);

  m.def("read_instance", [](const std::string& text) { return cmp::read_instance(text); },
        py::arg("text"));
  m.def("read_solution",
        [](const std::string& text, const cmp::Instance& inst) { return cmp::read_solution(text, inst); },
        py::arg("text"), py::arg("instance"));
  m.def("generate", &cmp::generate_instance, py::arg("n"), py::arg("w"), py::arg("density") = 0.0,
        py::arg("seed") = 1);
  m.def("lower_bound", py::overload_cast<const cmp::Instance&>(&cmp::lower_bound), py::arg("instance"));
  m.def("validate",
        [](const cmp::Instance& inst, const cmp::Solution& s) { return report_dict(cmp::validate(inst, s)); },
        py::arg("instance"), py::arg("solution"));

  m.def(
      "solve",
      [](const cmp::Instance& inst, const std::string& strategy, int b, std::uint64_t seed,
         const std::string& matching) {
        cmp::SolveOptions opt;
        opt.strategy = strategy;
        opt.b = b;
        opt.seed = seed;
        opt.matching = matching == "exact" ? cmp::Matching::Exact : cmp::Matching::Greedy;
        py::gil_scoped_release release;
        return cmp::solve(inst, opt);
      },
      py::arg("instance"), py::arg("strategy") = "cross", py::arg("b") = 0, py::arg("seed") = 0,
      py::arg("matching") = "greedy");

  m.def(
      "optimize",
      [](const cmp::Instance& inst, const cmp::Solution& s, const std::string& method,
         double time_limit, std::size_t max_steps, std::uint64_t seed, int target_makespan,
         bool reset_q) {
        cmp::OptimizeBudget budget;
        budget.time_limit = time_limit;
        budget.max_steps = max_steps;
        budget.seed = seed;
        budget.target_makespan = target_makespan;
        cmp::OptimizeOptions opt;
        opt.method = cmp::parse_optimize_method(method);
        opt.conflict.reset_counts = reset_q;
        py::gil_scoped_release release;
        return cmp::optimize(inst, s, budget, opt);
      },
      py::arg("instance"), py::arg("solution"), py::arg("method") = "auto",
      py::arg("time_limit") = 10.0, py::arg("max_steps") = 0, py::arg("seed") = 0,
      py::arg("target_makespan") = 0, py::arg("reset_q") = true);

  m.def(
      "transform_instance",
      [](const cmp::Instance& inst, const std::string& op) {
        return cmp::apply_transform(inst, cmp::parse_transform(op));
      },
      py::arg("instance"), py::arg("op"));
  m.def(
      "transform_solution",
      [](const cmp::Solution& s, const std::string& op) {
        return cmp::apply_transform(s, cmp::parse_transform(op));
      },
      py::arg("solution"), py::arg("op"));

  m.def(
      "render_svg",
      [](const cmp::Instance& inst, const cmp::Solution& s, const std::string& color_by) {
        cmp::SvgOptions opt;
        opt.color_by = color_by == "target" ? cmp::ColorBy::Target : cmp::ColorBy::Start;
        return cmp::render_svg(inst, s, opt);
      },
      py::arg("instance"), py::arg("solution"), py::arg("color_by") = "start");
}
