#include <doctest.h>

#include "cmp/errors.hpp"
#include "cmp/io.hpp"
#include "cmp/solve.hpp"
#include "cmp/validate.hpp"

using namespace cmp;

TEST_CASE("solve dispatches every strategy") {
  const Instance inst = generate_instance(15, 7, 0.0, 11);
  for (const char* name : {"greedy", "cross", "cootie", "dichotomy", "escape"}) {
    SolveOptions opt;
    opt.strategy = name;
    opt.seed = 3;
    INFO(name);
    const Solution s = solve(inst, opt);
    CHECK(validate(inst, s).feasible);
    CHECK(s == solve(inst, opt));
  }
  SolveOptions bad;
  bad.strategy = "spiral";
  CHECK_THROWS_AS(solve(inst, bad), std::invalid_argument);
}

TEST_CASE("solve reports preconditions and stalls") {
  std::vector<Cell> walls;
  for (int x = 0; x <= 12; ++x) {
    walls.push_back({x, 1});
    walls.push_back({x, -1});
  }
  const Instance corridor = make_instance("pingpong", walls, {{2, 0}, {10, 0}}, {{10, 0}, {2, 0}});
  SolveOptions opt;
  opt.strategy = "dichotomy";
  CHECK_THROWS_AS(solve(corridor, opt), UnsupportedInstance);
  opt.strategy = "greedy";
  CHECK_THROWS_AS(solve(corridor, opt), SolverFailure);
  opt.strategy = "cross";
  CHECK(validate(corridor, solve(corridor, opt)).feasible);
}

TEST_CASE("optimize methods") {
  const Instance inst = generate_instance(25, 8, 0.1, 12);
  const Solution start = solve(inst, {});
  OptimizeBudget budget;
  budget.time_limit = 1e6;
  budget.max_steps = 200;
  budget.seed = 5;
  for (const char* name : {"feasible", "conflict", "auto"}) {
    OptimizeOptions opt;
    opt.method = parse_optimize_method(name);
    const Solution s = optimize(inst, start, budget, opt);
    INFO(name);
    CHECK(validate(inst, s).feasible);
    CHECK(s.makespan() <= start.makespan());
  }
  CHECK_THROWS_AS(parse_optimize_method("anneal"), std::invalid_argument);
}
