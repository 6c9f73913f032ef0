#include <cmath>
#include <limits>

#include "doctest.h"
#include "otk/error.hpp"
#include "otk/measure.hpp"
#include "test_support.hpp"

using namespace otk;
using namespace otk::testing;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an otk::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("canonicalize merges duplicates") {
  const auto c = canonicalize(signed_line({0, 0}, {0.5, 0.5}));
  REQUIRE(c.size() == 1);
  CHECK(c.points()[0] == Point{0.0});
  CHECK(c.weights()[0] == 1.0);
}

TEST_CASE("canonicalize drops zero atoms") {
  const auto c = canonicalize(signed_line({1, 2}, {0.0, 1.0}));
  REQUIRE(c.size() == 1);
  CHECK(c.points()[0] == Point{2.0});
}

TEST_CASE("canonicalize sorts points") {
  const auto c = canonicalize(signed_line({2, 1}, {0.3, 0.7}));
  CHECK(c.points() == std::vector<Point>{{1.0}, {2.0}});
  CHECK(c.weights() == std::vector<double>{0.7, 0.3});
}

TEST_CASE("canonicalize identifies negative and positive zero") {
  const auto c = canonicalize(signed_line({-0.0, 0.0}, {1.0, 2.0}));
  REQUIRE(c.size() == 1);
  CHECK(c.weights()[0] == 3.0);
  CHECK_FALSE(std::signbit(c.points()[0][0]));
}

TEST_CASE("construction rejects non-finite and malformed input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(code_of([&] { signed_line({0}, {nan}); }) == ErrorCode::InvalidMeasure);
  CHECK(code_of([&] { signed_line({inf}, {1.0}); }) == ErrorCode::InvalidMeasure);
  CHECK(code_of([&] { signed_line({0, 1}, {1.0}); }) == ErrorCode::InvalidMeasure);
  CHECK(code_of([&] { line_measure({0}, {-1.0}); }) == ErrorCode::InvalidMeasure);
  CHECK(code_of([&] { SignedDiscreteMeasure(2, {{1.0}}, {1.0}); }) == ErrorCode::InvalidMeasure);
  CHECK(code_of([&] { SignedDiscreteMeasure(0, {}, {}); }) == ErrorCode::InvalidMeasure);
}

TEST_CASE("jordan_decompose splits by sign") {
  SUBCASE("two atoms") {
    const auto j = jordan_decompose(signed_line({0, 1}, {1, -2}));
    CHECK(j.positive.points() == std::vector<Point>{{0.0}});
    CHECK(j.positive.weights() == std::vector<double>{1.0});
    CHECK(j.negative.points() == std::vector<Point>{{1.0}});
    CHECK(j.negative.weights() == std::vector<double>{2.0});
  }
  SUBCASE("all positive") {
    const auto j = jordan_decompose(signed_line({0, 3}, {1, 2}));
    CHECK(j.positive.weights() == std::vector<double>{1, 2});
    CHECK(j.negative.empty());
  }
  SUBCASE("negative first") {
    const auto j = jordan_decompose(signed_line({-1, 0}, {-0.5, 0.5}));
    CHECK(j.positive.points() == std::vector<Point>{{0.0}});
    CHECK(j.negative.points() == std::vector<Point>{{-1.0}});
    CHECK(j.negative.weights() == std::vector<double>{0.5});
  }
}

TEST_CASE("jordan parts recombine and carry mass and integral") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = uniform_int(rng, 1, 8), dim = uniform_int(rng, 1, 3);
    std::vector<double> w(n);
    for (double& x : w) x = uniform(rng, -2, 2);
    const SignedDiscreteMeasure a(dim, random_points(rng, n, dim), w);
    const auto j = jordan_decompose(a);
    const auto back = difference(j.positive, j.negative);
    const auto canon = canonicalize(a);
    CHECK(back.points() == canon.points());
    CHECK(back.weights() == canon.weights());
    CHECK(a.total_mass() == doctest::Approx(j.positive.total_mass() + j.negative.total_mass()));
    CHECK(a.total_integral() ==
          doctest::Approx(j.positive.total_mass() - j.negative.total_mass()));
    for (const Point& p : j.positive.points()) {
      for (const Point& q : j.negative.points()) CHECK(p != q);
    }
  }
}

TEST_CASE("rn_derivative") {
  SUBCASE("identity") {
    const auto mu = line_measure({0, 1, 2}, {0.2, 0.3, 0.5});
    const auto f = rn_derivative(mu, mu);
    for (double v : f.values) CHECK(v == doctest::Approx(1.0));
    CHECK(f.bound == doctest::Approx(1.0));
  }
  SUBCASE("ratio") {
    const auto f = rn_derivative(line_measure({0}, {1.0}), line_measure({0, 1}, {0.5, 0.5}));
    CHECK(f.values == std::vector<double>{2.0, 0.0});
    CHECK(f.bound == 2.0);
  }
  SUBCASE("disjoint support") {
    CHECK(code_of([] { rn_derivative(line_measure({1}, {1.0}), line_measure({0}, {0.5})); }) ==
          ErrorCode::NotAbsolutelyContinuous);
  }
}

TEST_CASE("rn_derivative integrates back to the mass of eta") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = random_measure(rng, uniform_int(rng, 1, 9), 2);
    std::vector<double> eta_w(mu.size());
    for (double& x : eta_w) x = uniform(rng, 0.0, 3.0) * (uniform(rng, 0, 1) < 0.3 ? 0.0 : 1.0);
    const DiscreteMeasure eta(2, mu.points(), eta_w);
    const auto f = rn_derivative(eta, mu);
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += f.values[i] * mu.weights()[i];
    CHECK(rel_diff(s, eta.total_mass()) <= 1e-12);
  }
}

TEST_CASE("moment sums |w| c_X") {
  auto sq = [](const Point& x) { return x[0] * x[0]; };
  auto ab = [](const Point& x) { return std::abs(x[0]); };
  CHECK(moment(signed_line({0}, {1}), sq).cx_integral == 0.0);
  CHECK(moment(signed_line({1, -1}, {1, 1}), sq).cx_integral == 2.0);
  const auto r = moment(signed_line({2}, {0.5}), ab);
  CHECK(r.cx_integral == 1.0);
  CHECK(r.finite);
  CHECK(moment(signed_line({1, -1}, {1, -1}), sq).cx_integral == 2.0);
}

TEST_CASE("max_atom_difference aligns by point") {
  const auto a = signed_line({0, 1}, {1, -1});
  const auto b = signed_line({1, 0, 2}, {-1, 1, 0.25});
  CHECK(max_atom_difference(a, b) == 0.25);
  CHECK(max_atom_difference(a, a) == 0.0);
}
