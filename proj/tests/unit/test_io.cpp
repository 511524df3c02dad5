#include <doctest.h>

#include <random>

#include "cmp/io.hpp"
#include "support/oracles.hpp"

using namespace cmp;

TEST_CASE("read_instance minimal document") {
  const Instance inst =
      read_instance(R"({"name":"t","obstacles":[],"starts":[[0,0]],"targets":[[2,0]]})");
  CHECK(inst.name() == "t");
  REQUIRE(inst.size() == 1);
  CHECK(inst.robot(0).start == Cell{0, 0});
  CHECK(inst.robot(0).target == Cell{2, 0});
}

TEST_CASE("read_instance errors") {
  CHECK_THROWS_AS(read_instance("{not json"), ParseError);
  CHECK_THROWS_AS(
      read_instance(R"({"name":"t","obstacles":[],"starts":[[0,0],[0,0]],"targets":[[1,0],[2,0]]})"),
      ValidationError);
  CHECK_THROWS_AS(
      read_instance(R"({"name":"t","obstacles":[[5,5]],"starts":[[0,0]],"targets":[[5,5]]})"),
      ValidationError);
  CHECK_THROWS_AS(
      read_instance(R"({"name":"t","obstacles":[],"starts":[[0,0]],"targets":[]})"),
      ValidationError);
  CHECK_THROWS_AS(read_instance(R"({"name":"t","obstacles":[],"starts":[[0]],"targets":[[1,1]]})"),
                  ParseError);
}

TEST_CASE("write_solution encodes only moves") {
  const Instance inst = make_instance("t", {}, {{0, 0}}, {{1, 1}});
  Solution s{"t", {{{0, 0}, {1, 0}, {1, 1}}}};
  const std::string text = write_solution(s);
  CHECK(text.find(R"("steps":[{"0":"E"},{"0":"N"}])") != std::string::npos);
  CHECK(read_solution(text, inst) == s);

  Solution waits{"t", {{{0, 0}, {0, 0}, {0, 0}}}};
  CHECK(write_solution(waits).find(R"("steps":[{},{}])") != std::string::npos);
}

TEST_CASE("read_solution errors") {
  const Instance inst = make_instance("t", {}, {{0, 0}}, {{1, 1}});
  CHECK_THROWS_AS(read_solution(R"({"instance":"t","steps":[{"0":"X"}]})", inst), ParseError);
  CHECK_THROWS_AS(read_solution(R"({"instance":"t","steps":[{"1":"N"}]})", inst), ParseError);
  CHECK_THROWS_AS(read_solution(R"({"instance":"t","steps":[{"a":"N"}]})", inst), ParseError);
}

TEST_CASE("instance and solution round trips") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = testing::random_instance(rng, 6, 7, 0.15, "rt" + std::to_string(trial));
    CHECK(read_instance(write_instance(inst)) == inst);
    Solution s{inst.name(), {}};
    const int m = static_cast<int>(rng() % 6);
    for (const Robot& r : inst.robots()) {
      Path p{r.start};
      for (int t = 0; t < m; ++t) p.push_back(apply_move(p.back(), kAllMoves[rng() % 5]));
      s.paths.push_back(p);
    }
    CHECK(read_solution(write_solution(s, {"x", 17}), inst) == s);
  }
}

TEST_CASE("solution header reads meta") {
  Solution s{"abc", {{{0, 0}, {1, 0}, {1, 0}}}};
  const SolutionHeader h = read_solution_header(write_solution(s, {"cross", 1234}));
  CHECK(h.instance == "abc");
  CHECK(h.makespan == 2);
  CHECK(h.distance_sum == 1);
  CHECK(h.solver == "cross");
  CHECK(h.timestamp == 1234);
}

TEST_CASE("generate_instance") {
  const Instance one = generate_instance(1, 2, 0.0, 7);
  REQUIRE(one.size() == 1);
  for (Cell c : {one.robot(0).start, one.robot(0).target}) {
    CHECK(c.x >= 0);
    CHECK(c.x < 2);
    CHECK(c.y >= 0);
    CHECK(c.y < 2);
  }
  CHECK_THROWS_AS(generate_instance(5, 2, 0.0, 1), CapacityError);

  const Instance a = generate_instance(40, 10, 0.0, 1);
  CHECK(a.size() == 40);
  CHECK(a == generate_instance(40, 10, 0.0, 1));
  CHECK_FALSE(a == generate_instance(40, 10, 0.0, 2));

  const Instance dense = generate_instance(30, 12, 0.2, 5);
  CHECK(dense.obstacles().size() == 29);
  for (const Robot& r : dense.robots()) {
    CHECK_FALSE(dense.is_obstacle(r.start));
    CHECK_FALSE(dense.is_obstacle(r.target));
  }
}
