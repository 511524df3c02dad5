#include <doctest.h>

#include <cmath>
#include <random>

#include "cmp/distance.hpp"
#include "cmp/io.hpp"
#include "support/oracles.hpp"

using namespace cmp;

TEST_CASE("bounding box margins") {
  const Instance inst = make_instance("b", {}, {{0, 0}}, {{3, 3}});
  CHECK(compute_bounding_box(inst, 2).rect == Rect{{-1, -1}, {4, 4}});
  CHECK(compute_bounding_box(inst, 4).rect == Rect{{-3, -3}, {6, 6}});
  CHECK_THROWS_AS(compute_bounding_box(inst, 1), std::invalid_argument);
}

TEST_CASE("depth field") {
  // A ring of obstacles around (5,5) seals it off.
  std::vector<Cell> ring;
  for (int x = 4; x <= 6; ++x) {
    for (int y = 4; y <= 6; ++y) {
      if (x != 5 || y != 5) ring.push_back({x, y});
    }
  }
  const Instance inst = make_instance("d", ring, {{0, 0}}, {{9, 9}});
  const BoundingBox box = compute_bounding_box(inst);
  const DepthField depth = compute_depth(inst, box);
  CHECK(depth.at(box.rect.lo) == 1);
  CHECK(depth.at({-5, -5}) == 0);
  CHECK(depth.at({0, 0}) >= 2);
  CHECK(depth.at({9, 9}) >= 2);
  CHECK_FALSE(is_finite(depth.at({5, 5})));
  CHECK(depth.at({4, 4}) == depth.at({3, 4}) + 1);
}

TEST_CASE("oracle on a free grid keeps one kink per row") {
  const Instance inst = make_instance("f", {}, {{0, 0}}, {{8, 8}});
  const BoundingBox box = compute_bounding_box(inst);
  const DistanceOracle o = build_oracle(inst, box, {1, 2});
  for (int y = box.rect.lo.y; y <= box.rect.hi.y; ++y) CHECK(o.row_breakpoint_count(y) <= 3);
  CHECK(o.query({5, 7}) == 9);
  CHECK(o.query({1, 2}) == 0);
  CHECK(o.query({-20, 30}) == 21 + 28);
}

TEST_CASE("oracle answers above the box through the nearest row") {
  // Top row y=9 spans x in [-2,2] with distances 11,10,9,10,11 to (0,0);
  // stored points are x=-2,0,2. The cell (1,10) is one line above, between
  // the stored 9 and 11.
  const Instance inst = make_instance("fig", {}, {{-1, 1}}, {{1, 8}});
  const BoundingBox box = compute_bounding_box(inst);
  REQUIRE(box.rect == Rect{{-2, 0}, {2, 9}});
  const DistanceOracle o = build_oracle(inst, box, {0, 0});
  const auto top = o.row(9);
  REQUIRE(top.size() == 3);
  CHECK(top[1].x == 0);
  CHECK(top[1].dist == 9);
  CHECK(top[2].x == 2);
  CHECK(top[2].dist == 11);
  CHECK(o.query({1, 10}) == 11);
}

TEST_CASE("oracle matches BFS on random obstacle grids") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const int w = 5 + static_cast<int>(rng() % 20);
    const Instance inst = testing::random_instance(rng, 4, w, 0.2);
    const BoundingBox box = compute_bounding_box(inst);
    for (const Robot& r : inst.robots()) {
      const DistanceOracle o = build_oracle(inst, box, r.target);
      const Rect big = box.rect.expanded(3);
      const auto ref = testing::reference_bfs(inst, big.lo, big.hi, r.target);
      for (int y = big.lo.y; y <= big.hi.y; ++y) {
        for (int x = big.lo.x; x <= big.hi.x; ++x) {
          const auto it = ref.find({x, y});
          const int expected = it == ref.end() ? kInfDistance : it->second;
          REQUIRE(o.query({x, y}) == expected);
        }
      }
      CHECK(o.breakpoint_count() <= box.rect.area());
    }
  }
}

TEST_CASE("oracle is Lipschitz and rotation-consistent") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const Instance inst = testing::random_instance(rng, 3, 12, 0.15);
    const BoundingBox box = compute_bounding_box(inst);
    const Cell t = inst.robot(0).target;
    const DistanceOracle o = build_oracle(inst, box, t);

    std::vector<Cell> rot_obs;
    for (Cell c : inst.obstacles()) rot_obs.push_back({-c.y, c.x});
    std::vector<Cell> rs, rt;
    for (const Robot& r : inst.robots()) {
      rs.push_back({-r.start.y, r.start.x});
      rt.push_back({-r.target.y, r.target.x});
    }
    const Instance rot = make_instance("rot", rot_obs, rs, rt);
    const DistanceOracle ro = build_oracle(rot, compute_bounding_box(rot), {-t.y, t.x});

    for (int y = box.rect.lo.y - 1; y <= box.rect.hi.y + 1; ++y) {
      for (int x = box.rect.lo.x - 1; x <= box.rect.hi.x + 1; ++x) {
        const int d = o.query({x, y});
        CHECK(ro.query({-y, x}) == d);
        if (!is_finite(d)) continue;
        for (Cell nb : {Cell{x + 1, y}, Cell{x, y + 1}}) {
          const int dn = o.query(nb);
          if (is_finite(dn)) CHECK(std::abs(dn - d) <= 1);
        }
      }
    }
  }
}

TEST_CASE("query comparisons are logarithmic") {
  const Instance inst = generate_instance(10, 40, 0.2, 4);
  const BoundingBox box = compute_bounding_box(inst);
  const DistanceOracle o = build_oracle(inst, box, inst.robot(0).target);
  const Rect& r = o.rect();
  for (int y = r.lo.y; y <= r.hi.y; ++y) {
    const auto bound = static_cast<std::size_t>(
        std::ceil(std::log2(static_cast<double>(o.row_breakpoint_count(y))))) + 2;
    for (int x = r.lo.x; x <= r.hi.x; ++x) {
      std::size_t cmps = 0;
      o.query({x, y}, &cmps);
      CHECK(cmps <= bound);
    }
  }
}

TEST_CASE("oracle cache returns shared oracles") {
  const Instance inst = make_instance("c", {}, {{0, 0}, {2, 2}}, {{3, 0}, {0, 3}});
  OracleCache cache(inst, compute_bounding_box(inst));
  CHECK(cache.get({3, 0}) == cache.get({3, 0}));
  CHECK(cache.distance({0, 0}, {3, 0}) == 3);
}
