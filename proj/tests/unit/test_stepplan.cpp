#include <doctest.h>

#include <random>

#include "cmp/stepplan.hpp"
#include "cmp/validate.hpp"
#include "support/oracles.hpp"

using namespace cmp;
using cmp::testing::brute_force_violations;
using cmp::testing::random_instance;
using cmp::testing::all_reachable;
using cmp::testing::enumerate_best;
using cmp::testing::reference_bfs;

namespace {

struct Oracles {
  OracleCache cache;
  std::vector<std::shared_ptr<const DistanceOracle>> keep;
  std::vector<const DistanceOracle*> ptrs;
  explicit Oracles(const Instance& inst) : cache(inst, compute_bounding_box(inst)) {
    for (const Robot& r : inst.robots()) {
      keep.push_back(cache.get(r.target));
      ptrs.push_back(keep.back().get());
    }
  }
};

std::vector<Cell> starts_of(const Instance& inst) {
  std::vector<Cell> v;
  for (const Robot& r : inst.robots()) v.push_back(r.start);
  return v;
}

}  // namespace

TEST_CASE("step weight") {
  CHECK(step_weight(5, 3) == 52);
  CHECK(step_weight(0, 0) == 0);
  CHECK(step_weight(0, 1) == -1);
  CHECK(step_weight(9, 8) == 82);
  CHECK(step_weight(2, 1) == 5);
}

TEST_CASE("candidate paths") {
  const Instance inst = make_instance("c", {{1, 0}}, {{0, 0}}, {{3, 3}});
  Oracles o(inst);
  const auto one = candidate_paths(inst, 0, {0, 0}, 1, *o.ptrs[0]);
  CHECK(one.size() == 4);
  const auto three = candidate_paths(inst, 0, {0, 0}, 3, *o.ptrs[0]);
  CHECK(three.size() < 125);
  for (const auto& c : three) {
    CHECK(c.cells.size() == 4);
    for (Cell x : c.cells) CHECK_FALSE(inst.is_obstacle(x));
  }
  CHECK_THROWS_AS(candidate_paths(inst, 0, {0, 0}, 0, *o.ptrs[0]), std::invalid_argument);
}

TEST_CASE("plan compatibility") {
  const CandidatePath a{0, {{0, 0}, {1, 0}}, 0};
  const CandidatePath swap{1, {{1, 0}, {0, 0}}, 0};
  const CandidatePath train{1, {{1, 0}, {2, 0}}, 0};
  const CandidatePath orth{1, {{1, 0}, {1, 1}}, 0};
  const CandidatePath same{1, {{0, 1}, {1, 0}}, 0};
  CHECK_FALSE(compatible(a, swap));
  CHECK(compatible(a, train));
  CHECK_FALSE(compatible(a, orth));
  CHECK_FALSE(compatible(a, same));
}

TEST_CASE("single robot steps toward its target") {
  const Instance inst = make_instance("s", {}, {{0, 0}}, {{4, 0}});
  Oracles o(inst);
  StepPlanConfig cfg;
  cfg.k = 1;
  const RoundPlan p = plan_round(inst, starts_of(inst), o.ptrs, cfg);
  CHECK(p.selected[0].cells[1] == Cell{1, 0});
  CHECK(p.objective == step_weight(4, 3));
  CHECK(p.optimal);
}

TEST_CASE("the farther robot wins a contested cell") {
  const Instance inst = make_instance("f", {}, {{0, 0}, {1, 1}}, {{9, 0}, {1, -1}});
  Oracles o(inst);
  StepPlanConfig cfg;
  cfg.k = 1;
  const RoundPlan p = plan_round(inst, starts_of(inst), o.ptrs, cfg);
  CHECK(p.selected[0].cells[1] == Cell{1, 0});
  CHECK(p.selected[1].cells[1] == Cell{1, 1});
  CHECK(p.objective == 82);
}

TEST_CASE("facing robots in a short corridor") {
  std::vector<Cell> walls;
  for (int x = -1; x <= 2; ++x) {
    walls.push_back({x, 1});
    walls.push_back({x, -1});
  }
  const Instance inst = make_instance("cor", walls, {{0, 0}, {1, 0}}, {{1, 0}, {0, 0}});
  Oracles o(inst);
  StepPlanConfig cfg;
  cfg.k = 2;
  const RoundPlan p = plan_round(inst, starts_of(inst), o.ptrs, cfg);
  CHECK(compatible(p.selected[0], p.selected[1]));
  CHECK(p.objective == enumerate_best(inst, 2));
}

TEST_CASE("plan_round matches joint enumeration on micro instances") {
  std::mt19937 rng(2024);
  int checked = 0;
  while (checked < 100) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int k = 1 + static_cast<int>(rng() % 2);
    const Instance inst = random_instance(rng, n, 4, 0.15);
    if (!all_reachable(inst)) continue;
    Oracles o(inst);
    StepPlanConfig cfg;
    cfg.k = k;
    cfg.round_time_budget = 60.0;
    const RoundPlan p = plan_round(inst, starts_of(inst), o.ptrs, cfg);
    INFO("case ", checked, " n=", n, " k=", k);
    CHECK(p.optimal);
    CHECK(p.objective == enumerate_best(inst, k));
    ++checked;
  }
}

TEST_CASE("large groups still select compatible plans") {
  std::mt19937 rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    const Instance inst = random_instance(rng, 40, 10, 0.0);
    Oracles o(inst);
    const RoundPlan p = plan_round(inst, starts_of(inst), o.ptrs, {});
    CHECK_FALSE(p.optimal);
    CHECK(p.objective >= 0);
    for (std::size_t a = 0; a < inst.size(); ++a) {
      for (std::size_t b = a + 1; b < inst.size(); ++b) {
        CHECK(compatible(p.selected[a], p.selected[b]));
      }
    }
  }
}

TEST_CASE("greedy solver") {
  SUBCASE("nothing to do") {
    const Instance inst = make_instance("z", {}, {{0, 0}, {2, 2}}, {{0, 0}, {2, 2}});
    const GreedyResult r = greedy_solve(inst);
    CHECK(r.success);
    CHECK(r.solution.makespan() == 0);
  }
  SUBCASE("sparse free grid") {
    std::mt19937 rng(4);
    const Instance inst = random_instance(rng, 10, 10, 0.0);
    const GreedyResult r = greedy_solve(inst);
    REQUIRE(r.success);
    CHECK(validate(inst, r.solution).feasible);
    CHECK(brute_force_violations(inst, r.solution).empty());
    CHECK(r.solution.makespan() >= lower_bound(inst));
  }
  SUBCASE("head-on corridor stalls") {
    std::vector<Cell> walls;
    for (int x = 0; x <= 12; ++x) {
      walls.push_back({x, 1});
      walls.push_back({x, -1});
    }
    const Instance inst = make_instance("pingpong", walls, {{2, 0}, {10, 0}}, {{10, 0}, {2, 0}});
    const GreedyResult r = greedy_solve(inst);
    CHECK_FALSE(r.success);
    CHECK(r.failure.rfind("stalled", 0) == 0);
    CHECK(validate(make_instance("p", walls, {{2, 0}, {10, 0}},
                                 {r.solution.paths[0].back(), r.solution.paths[1].back()}),
                   r.solution)
              .feasible);
  }
}
