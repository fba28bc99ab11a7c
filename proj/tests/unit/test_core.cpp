#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "cellgeo/core.hpp"
#include "cellgeo/error.hpp"
#include "cellgeo/random.hpp"
#include "cellgeo/sim.hpp"

using namespace cellgeo;

TEST_SUITE("core") {

TEST_CASE("window validation and geometry") {
  CHECK_THROWS_AS(Window(0, 0, 0, 1), ConfigError);
  CHECK_THROWS_AS(Window(0, 1, 2, 1), ConfigError);
  CHECK_THROWS_AS(Window(0, std::numeric_limits<double>::infinity(), 0, 1), ConfigError);
  const Window w(0, 2, 0, 1);
  CHECK(w.area() == doctest::Approx(2.0));
  CHECK(w.shorter_side() == doctest::Approx(1.0));
  CHECK(w.diameter() == doctest::Approx(std::sqrt(5.0)));
  CHECK(w.contains({2, 1}));
  CHECK_FALSE(w.contains({2.0001, 0.5}));
  CHECK(w.boundary_distance({0.5, 0.2}) == doctest::Approx(0.2));
  const Window d = w.dilated(0.5);
  CHECK(d.x_min() == doctest::Approx(-0.5));
  CHECK(d.y_max() == doctest::Approx(1.5));
}

TEST_CASE("point pattern rejects points outside the window") {
  CHECK_THROWS_AS(PointPattern(Window::unit(), {{0.5, 1.5}}), DataError);
  CHECK_THROWS_AS(PointPattern(Window::unit(), {{std::nan(""), 0.5}}), DataError);
  const PointPattern p(Window(0, 2, 0, 2), std::vector<Point>(100, Point{1, 1}));
  CHECK(p.intensity() == doctest::Approx(25.0));
}

TEST_CASE("rescale_to_unit") {
  SUBCASE("midpoint of [0,2]^2") {
    const auto out = rescale_to_unit(PointPattern(Window(0, 2, 0, 2), {{1, 1}}));
    CHECK(out.window() == Window::unit());
    CHECK(out[0].x == doctest::Approx(0.5));
    CHECK(out[0].y == doctest::Approx(0.5));
  }
  SUBCASE("unit square is unchanged") {
    const PointPattern p(Window::unit(), {{0.1, 0.9}, {0.3, 0.2}, {1, 0}});
    CHECK(rescale_to_unit(p) == p);
  }
  SUBCASE("each axis scaled independently") {
    const auto out = rescale_to_unit(PointPattern(Window(10, 12, 0, 1), {{11.5, 0.25}}));
    CHECK(out[0].x == doctest::Approx(0.75));
    CHECK(out[0].y == doctest::Approx(0.25));
  }
  SUBCASE("inter-point order along each axis is preserved") {
    const auto p = sample_poisson(50, Window(-3, 5, 2, 3), RngSeed{4});
    const auto q = rescale_to_unit(p);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      CHECK((p[i].x < p[i + 1].x) == (q[i].x < q[i + 1].x));
      CHECK((p[i].y < p[i + 1].y) == (q[i].y < q[i + 1].y));
    }
  }
}

TEST_CASE("close_pair_count") {
  const PointPattern line(Window::unit(), {{0.1, 0.5}, {0.15, 0.5}, {0.25, 0.5}});
  CHECK(close_pair_count(line, 0.12) == 2);
  CHECK(close_pair_count(line, 0.0) == 0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = sample_poisson(100, Window::unit(), RngSeed{seed});
    const std::vector<Point> pts(p.points().begin(), p.points().end());
    for (double r : {0.01, 0.05, 0.1, 0.3, 2.0}) {
      CHECK(close_pair_count(p, r) == static_cast<std::uint64_t>(oracle::pair_count(pts, r)));
    }
  }
}

TEST_CASE("nn_distances") {
  const PointPattern p(Window::unit(), {{0, 0}, {0, 0.1}, {0, 0.4}});
  const auto d = nn_distances(p);
  REQUIRE(d.size() == 3);
  CHECK(d[0] == doctest::Approx(0.1));
  CHECK(d[1] == doctest::Approx(0.1));
  CHECK(d[2] == doctest::Approx(0.3));

  const auto dup = nn_distances(PointPattern(Window::unit(), {{0.5, 0.5}, {0.5, 0.5}}));
  CHECK(dup == std::vector<double>{0.0, 0.0});

  CHECK_THROWS_AS(nn_distances(PointPattern(Window::unit(), {{0.5, 0.5}})), DataError);

  const auto q = sample_poisson(50, Window::unit(), RngSeed{8});
  const std::vector<Point> pts(q.points().begin(), q.points().end());
  const auto expected = oracle::nn(pts);
  const auto got = nn_distances(q);
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expected[i]));
  CHECK(min_pair_distance(q.points()) == doctest::Approx(*std::min_element(expected.begin(), expected.end())));
}

TEST_CASE("seed derivation is stable and order free") {
  CHECK(derive_seed(RngSeed{7}, 3).value == splitmix64(splitmix64(7) + 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(RngSeed{1}, i).value);
  CHECK(seen.size() == 1000);
}

TEST_CASE("rng variates") {
  Rng rng(RngSeed{11});
  const int n = 200000;
  double su = 0, se = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    se += rng.exponential();
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(se / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::fabs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));

  for (double mean : {0.0, 2.5, 9.9, 10.0, 37.0, 261.6}) {
    const int m = 20000;
    double s = 0, s2 = 0;
    for (int i = 0; i < m; ++i) {
      const auto k = static_cast<double>(rng.poisson(mean));
      s += k;
      s2 += k * k;
    }
    const double avg = s / m;
    const double var = s2 / m - avg * avg;
    CHECK(std::fabs(avg - mean) <= 4.0 * std::sqrt(std::max(mean, 1e-9) / m) + 1e-12);
    if (mean > 0) CHECK(var == doctest::Approx(mean).epsilon(0.05));
  }
  CHECK_THROWS(rng.poisson(-1.0));
}

TEST_CASE("parallel_for covers every index and rethrows the lowest failure") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error("failed " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "failed 17");
  }
}

}  // TEST_SUITE
