#include <cmath>

#include "doctest.h"
#include "otk/coupling.hpp"
#include "otk/cost.hpp"
#include "otk/error.hpp"
#include "test_support.hpp"

using namespace otk;
using namespace otk::testing;

TEST_CASE("build_cost_table") {
  SUBCASE("squared euclidean on the line") {
    const std::vector<Point> pts{{0.0}, {1.0}};
    const auto t = build_cost_table(pts, pts, CostSpec::squared_euclidean());
    CHECK(t.entries() == std::vector<double>{0, 1, 1, 0});
  }
  SUBCASE("power p = 1") {
    const auto t = build_cost_table(std::vector<Point>{{0.0}}, std::vector<Point>{{3.0}},
                                    CostSpec::power_distance(1.0));
    CHECK(t.at(0, 0) == 3.0);
  }
  SUBCASE("squared euclidean in the plane") {
    const auto t = build_cost_table(std::vector<Point>{{0.0, 0.0}},
                                    std::vector<Point>{{3.0, 4.0}}, CostSpec::squared_euclidean());
    CHECK(t.at(0, 0) == 25.0);
  }
  SUBCASE("convex profile") {
    const auto t = build_cost_table(std::vector<Point>{{1.0}}, std::vector<Point>{{3.0}},
                                    CostSpec::convex_1d(ConvexProfile::Quartic));
    CHECK(t.at(0, 0) == 16.0);
  }
}

TEST_CASE("cost errors") {
  CHECK_THROWS_AS(build_cost_table(std::vector<Point>{{0.0}}, std::vector<Point>{{0.0, 1.0}},
                                   CostSpec::squared_euclidean()),
                  Error);
  CHECK_THROWS_AS(build_cost_table(std::vector<Point>{{0.0, 1.0}}, std::vector<Point>{{0.0, 1.0}},
                                   CostSpec::convex_1d(ConvexProfile::Abs)),
                  Error);
  CHECK_THROWS_AS(CostSpec::power_distance(0.5), Error);
  CHECK_THROWS_AS(CostTable(1, 2, {1.0, -1.0}), Error);
  CHECK_THROWS_AS(CostTable(2, 2, {1.0}), Error);
  const auto spec = CostSpec::explicit_table(CostTable(1, 1, {2.0}));
  CHECK_THROWS_AS(build_cost_table(std::vector<Point>{{0.0}, {1.0}}, std::vector<Point>{{0.0}}, spec),
                  Error);
  CHECK(build_cost_table(std::vector<Point>{{7.0}}, std::vector<Point>{{9.0}}, spec).at(0, 0) == 2.0);
  CHECK_THROWS_AS(parse_convex_profile("concave"), Error);
}

TEST_CASE("separable_bound examples") {
  const auto sq = separable_bound(CostSpec::power_distance(2.0));
  const Point x{1.0}, y{-1.0};
  CHECK(CostSpec::power_distance(2.0)(x, y) == 4.0);
  CHECK(sq.c_x(x) + sq.c_y(y) == 4.0);

  const auto p1 = separable_bound(CostSpec::power_distance(1.0));
  CHECK(CostSpec::power_distance(1.0)({3.0}, {0.0}) <= p1.c_x({3.0}) + p1.c_y({0.0}));
  CHECK(p1.c_x({3.0}) + p1.c_y({0.0}) == 3.0);

  CHECK_FALSE(separable_bound(CostSpec::explicit_table(CostTable(1, 1, {0.0}))).valid);
}

TEST_CASE("separable bound holds on random pairs for every built-in cost") {
  Rng rng(21);
  const std::vector<CostSpec> specs{
      CostSpec::squared_euclidean(),        CostSpec::power_distance(1.0),
      CostSpec::power_distance(1.5),        CostSpec::power_distance(3.0),
      CostSpec::convex_1d(ConvexProfile::Abs), CostSpec::convex_1d(ConvexProfile::Square),
      CostSpec::convex_1d(ConvexProfile::Quartic),
      CostSpec::convex_1d(ConvexProfile::CoshMinusOne)};
  for (const CostSpec& spec : specs) {
    const bool line = std::holds_alternative<Convex1d>(spec.kind());
    const auto bound = separable_bound(spec);
    REQUIRE(bound.valid);
    for (int k = 0; k < 1000; ++k) {
      const std::size_t dim = line ? 1 : uniform_int(rng, 1, 3);
      Point x(dim), y(dim);
      for (double& v : x) v = uniform(rng, -4, 4);
      for (double& v : y) v = uniform(rng, -4, 4);
      const double c = spec(x, y);
      const double rhs = bound.c_x(x) + bound.c_y(y);
      CHECK_MESSAGE(c <= rhs * (1.0 + 1e-12) + 1e-300, spec.describe());
    }
  }
}

TEST_CASE("transport_cost") {
  const std::vector<Point> pts{{0.0}, {1.0}};
  const auto table = build_cost_table(pts, pts, CostSpec::squared_euclidean());
  CHECK(transport_cost(Coupling(1, pts, pts, {0.5, 0, 0, 0.5}), table) == 0.0);
  CHECK(transport_cost(Coupling(1, pts, pts, {0.3, 0, 0.3, 0.4}), table) == doctest::Approx(0.3));
  CHECK(transport_cost(Coupling(1, {}, {}, {}), CostTable(0, 0, {})) == 0.0);
  CHECK_THROWS_AS(transport_cost(Coupling(1, pts, {{0.0}}, {0.5, 0.5}), table), Error);
}

TEST_CASE("transport_cost is linear in the plan") {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = uniform_int(rng, 1, 6), n = uniform_int(rng, 1, 6);
    const auto src = random_points(rng, m, 2), tgt = random_points(rng, n, 2);
    const auto table = build_cost_table(src, tgt, CostSpec::squared_euclidean());
    std::vector<double> g1(m * n), g2(m * n), mix(m * n);
    const double a = uniform(rng, 0, 3), b = uniform(rng, 0, 3);
    for (std::size_t k = 0; k < m * n; ++k) {
      g1[k] = uniform(rng, 0, 1);
      g2[k] = uniform(rng, 0, 1);
      mix[k] = a * g1[k] + b * g2[k];
    }
    const double lhs = transport_cost(Coupling(2, src, tgt, mix), table);
    const double rhs = a * transport_cost(Coupling(2, src, tgt, g1), table) +
                       b * transport_cost(Coupling(2, src, tgt, g2), table);
    CHECK(rel_diff(lhs, rhs) <= 1e-12);
  }
}
