#include <limits>

#include "doctest.h"
#include "otk/error.hpp"
#include "otk/onedim.hpp"
#include "otk/solver.hpp"
#include "test_support.hpp"

using namespace otk;
using namespace otk::testing;

TEST_CASE("cdf") {
  const auto d = cdf(line_measure({0}, {1.0}));
  CHECK(d(-1e-9) == 0.0);
  CHECK(d(0.0) == 1.0);
  const auto h = cdf(line_measure({0, 1}, {0.5, 0.5}));
  CHECK(h(0.0) == 0.5);
  CHECK(h(0.999) == 0.5);
  CHECK(h(1.0) == 1.0);
  const auto e = cdf(DiscreteMeasure(1, {}, {}));
  CHECK(e(0.0) == 0.0);
  CHECK(e(1e9) == 0.0);
  CHECK_THROWS_AS(cdf(DiscreteMeasure(2, {{0.0, 0.0}}, {1.0})), Error);
}

TEST_CASE("quantile") {
  const auto h = cdf(line_measure({0, 1}, {0.5, 0.5}));
  CHECK(quantile(h, 0.5) == 0.0);
  CHECK(quantile(h, 0.50000001) == 1.0);
  CHECK(quantile(h, 1.0) == 1.0);
  const auto d = cdf(line_measure({0}, {1.0}));
  CHECK(quantile(d, 1e-9) == 0.0);
  CHECK(quantile(d, 1.0) == 0.0);
  try {
    quantile(d, 0.0);
    FAIL("expected QuantileRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuantileRange);
  }
  CHECK_THROWS_AS(quantile(d, 1.5), Error);
}

TEST_CASE("monotone_coupling") {
  SUBCASE("identical measures") {
    const auto mu = line_measure({2, 0, 1}, {0.2, 0.3, 0.5});
    const auto g = monotone_coupling(mu, mu);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(g.at(i, j) == doctest::Approx(i == j ? mu.weights()[i] : 0.0));
    }
  }
  SUBCASE("two by two") {
    const auto g = monotone_coupling(line_measure({0, 1}, {0.3, 0.7}), line_measure({0, 1}, {0.6, 0.4}));
    CHECK(g.at(0, 0) == doctest::Approx(0.3));
    CHECK(g.at(0, 1) == 0.0);
    CHECK(g.at(1, 0) == doctest::Approx(0.3));
    CHECK(g.at(1, 1) == doctest::Approx(0.4));
  }
  SUBCASE("single target") {
    const auto g = monotone_coupling(line_measure({0, 1}, {0.5, 0.5}), line_measure({5}, {1.0}));
    CHECK(g.mass() == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("mass mismatch") {
    try {
      monotone_coupling(line_measure({0}, {1.0}), line_measure({0}, {2.0}));
      FAIL("expected MassImbalance");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MassImbalance);
    }
  }
}

TEST_CASE("monotone coupling satisfies the min formula") {
  // gamma((-inf, x_i] x (-inf, y_j]) = min(F_mu(x_i), F_nu(y_j)).
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = random_measure(rng, uniform_int(rng, 1, 8), 1);
    const auto nu = random_measure(rng, uniform_int(rng, 1, 8), 1);
    const auto g = monotone_coupling(mu, nu);
    const auto F = cdf(mu), G = cdf(nu);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      for (std::size_t j = 0; j < nu.size(); ++j) {
        const double x = mu.points()[i][0], y = nu.points()[j][0];
        double s = 0.0;
        for (std::size_t a = 0; a < mu.size(); ++a) {
          for (std::size_t b = 0; b < nu.size(); ++b) {
            if (mu.points()[a][0] <= x && nu.points()[b][0] <= y) s += g.at(a, b);
          }
        }
        CHECK(std::abs(s - std::min(F(x), G(y))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("monotone coupling is optimal for convex costs") {
  Rng rng(62);
  const std::vector<CostSpec> specs{CostSpec::power_distance(1.0), CostSpec::power_distance(1.5),
                                    CostSpec::power_distance(2.0), CostSpec::power_distance(3.0),
                                    CostSpec::convex_1d(ConvexProfile::CoshMinusOne)};
  for (const CostSpec& spec : specs) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto mu = random_measure(rng, uniform_int(rng, 1, 7), 1, 2.0);
      const auto nu = random_measure(rng, uniform_int(rng, 1, 7), 1, 2.0);
      const auto t = build_cost_table(mu.points(), nu.points(), spec);
      CHECK(rel_diff(transport_cost(monotone_coupling(mu, nu), t), transport_cost(solve(mu, nu, t), t)) <=
            1e-9);
    }
  }
}

TEST_CASE("check_block_structure") {
  const std::vector<Point> pts{{0.0}, {1.0}};
  const double inf = std::numeric_limits<double>::infinity();
  const Coupling anti(1, pts, pts, {0, 0.5, 0.5, 0});
  const Coupling diag(1, pts, pts, {0.5, 0, 0, 0.5});
  const std::vector<BlockCut> whole{{inf, inf}};
  const std::vector<BlockCut> split{{0.0, 0.0}, {inf, inf}};
  CHECK(check_block_structure(anti, whole));
  CHECK(check_block_structure(diag, split));
  CHECK_FALSE(check_block_structure(anti, split));
  const std::vector<BlockCut> unequal{{0.0, 1.0}, {inf, inf}};
  try {
    check_block_structure(diag, unequal);
    FAIL("expected InvalidCut");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidCut);
  }
  const std::vector<BlockCut> decreasing{{0.5, 0.5}, {0.0, 0.0}};
  CHECK_THROWS_AS(check_block_structure(diag, decreasing), Error);
}
