#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "cellgeo/error.hpp"
#include "cellgeo/sim.hpp"
#include "cellgeo/stats.hpp"

using namespace cellgeo;

namespace {

std::vector<Point> pts(const PointPattern& p) { return {p.points().begin(), p.points().end()}; }

// Field of size side x side tiled from independent unit-square realizations.
PointPattern tile(const ModelSpec& spec, int side, RngSeed seed) {
  std::vector<Point> all;
  for (int i = 0; i < side * side; ++i) {
    const auto p = simulate(spec, Window::unit(), derive_seed(seed, static_cast<std::uint64_t>(i)));
    for (const Point& q : p.points()) all.push_back({q.x + i % side, q.y + i / side});
  }
  return PointPattern(Window(0, side, 0, side), std::move(all));
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("grids") {
  const auto g = open_grid(0.15, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == doctest::Approx(0.05));
  CHECK(g[2] == doctest::Approx(0.15));
  const auto l = linear_grid(-10, 20, 16);
  CHECK(l.front() == -10.0);
  CHECK(l.back() == 20.0);
  CHECK(l[1] == doctest::Approx(-8.0));
  CHECK(parse_curve_kind(curve_kind_name(CurveKind::Coverage)) == CurveKind::Coverage);
  CHECK_THROWS_AS(parse_curve_kind("J"), ConfigError);
}

TEST_CASE("g_function") {
  const PointPattern three(Window::unit(), {{0.2, 0.5}, {0.3, 0.5}, {0.6, 0.5}});
  const std::vector<double> grid{0.0, 0.1};
  const auto g = g_function(three, grid);
  CHECK(g.values[0] == 0.0);
  CHECK(g.values[1] == doctest::Approx(2.0 / 3.0));

  const auto p = sample_poisson(300, Window(0, 1, 0, 2), RngSeed{4});
  const std::vector<double> rs{0.01, 0.03, 0.05, 0.2};
  const auto got = g_function(p, rs);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(got.values[i] == doctest::Approx(oracle::g_reduced_sample(pts(p), oracle::box(p.window()), rs[i])));
  }

  std::vector<double> g02, g04;
  const std::vector<double> poisson_grid{0.02, 0.04};
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto c = g_function(sample_poisson(300, Window::unit(), derive_seed(RngSeed{9}, s)), poisson_grid);
    g02.push_back(c.values[0]);
    g04.push_back(c.values[1]);
  }
  auto theory = [](double r) { return 1.0 - std::exp(-300.0 * std::numbers::pi * r * r); };
  CHECK(std::fabs(oracle::mean(g02) - theory(0.02)) < 3.0 * oracle::std_error(g02));
  CHECK(std::fabs(oracle::mean(g04) - theory(0.04)) < 3.0 * oracle::std_error(g04));
}

TEST_CASE("k_function") {
  const PointPattern two(Window::unit(), {{0.45, 0.5}, {0.55, 0.5}});
  const std::vector<double> grid{0.05, 0.0999, 0.1, 0.3};
  const auto k = k_function(two, grid);
  CHECK(k.values[0] == 0.0);
  CHECK(k.values[1] == 0.0);
  CHECK(k.values[2] == doctest::Approx(1.0 / 0.9));
  CHECK(k.values[3] == doctest::Approx(1.0 / 0.9));
  CHECK_FALSE(k.warnings.empty());  // 0.3 exceeds a quarter of the side

  const auto p = sample_poisson(200, Window(0, 2, 0, 1), RngSeed{5});
  const auto rs = open_grid(0.25, 25);
  const auto got = k_function(p, rs);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(got.values[i] == doctest::Approx(oracle::k_translation(pts(p), oracle::box(p.window()), rs[i])));
    if (i > 0) CHECK(got.values[i] >= got.values[i - 1]);
  }

  std::vector<double> k05, k10;
  const std::vector<double> poisson_grid{0.05, 0.1};
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto c = k_function(sample_poisson(300, Window::unit(), derive_seed(RngSeed{10}, s)), poisson_grid);
    k05.push_back(c.values[0]);
    k10.push_back(c.values[1]);
  }
  CHECK(std::fabs(oracle::mean(k05) - std::numbers::pi * 0.0025) < 3.0 * oracle::std_error(k05));
  CHECK(std::fabs(oracle::mean(k10) - std::numbers::pi * 0.01) < 3.0 * oracle::std_error(k10));

  CHECK_THROWS_AS(k_function(PointPattern(Window::unit(), {{0.5, 0.5}}), grid), DataError);
}

TEST_CASE("l_function") {
  SummaryCurve k{CurveKind::K, {0.1, 0.2, 0.3}, {}, {}};
  for (double r : k.grid) k.values.push_back(std::numbers::pi * r * r);
  const auto l = l_from_k(k);
  CHECK(l.kind == CurveKind::L);
  for (std::size_t i = 0; i < 3; ++i) CHECK(l.values[i] == doctest::Approx(k.grid[i]));
  k.values.assign(3, 0.0);
  for (double v : l_from_k(k).values) CHECK(v == 0.0);

  // Matern cluster with the urban parameters is clustered at every scale.
  const auto grid = linear_grid(0.02, 0.15, 14);
  std::vector<double> sums(grid.size(), 0.0);
  const int runs = 200;
  for (std::uint64_t s = 0; s < runs; ++s) {
    const auto p = sample_matern_cluster(162.48, 0.067, 1.61, Window::unit(), derive_seed(RngSeed{11}, s));
    const auto c = l_function(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) sums[i] += c.values[i];
  }
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(sums[i] / runs > grid[i]);
}

TEST_CASE("kernel_density") {
  SUBCASE("single central point") {
    const PointPattern one(Window::unit(), {{0.5, 0.5}});
    const auto map = kernel_density(one, 0.1, 21, 21);
    const auto top = std::max_element(map.values.begin(), map.values.end()) - map.values.begin();
    CHECK(top == 10 * 21 + 10);
    double mass = 0;
    for (double v : map.values) mass += v * map.cell_area();
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("mass is conserved next to the boundary") {
    const PointPattern corner(Window(0, 2, 0, 1), {{0.01, 0.02}, {1.99, 0.5}});
    const auto map = kernel_density(corner, 0.3, 40, 20);
    double mass = 0;
    for (double v : map.values) mass += v * map.cell_area();
    CHECK(mass == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("empty pattern") {
    const auto map = kernel_density(PointPattern(Window::unit()), 0.1, 8, 8);
    CHECK(std::all_of(map.values.begin(), map.values.end(), [](double v) { return v == 0.0; }));
  }
  SUBCASE("uniform pattern gives a flat map") {
    const auto p = sample_poisson(1000, Window::unit(), RngSeed{12});
    const auto map = kernel_density(p, 0.1, 20, 20);
    const double m = oracle::mean(map.values);
    double ss = 0;
    for (double v : map.values) ss += (v - m) * (v - m);
    CHECK(std::sqrt(ss / map.values.size()) / m < 0.2);
  }
  CHECK_THROWS_AS(kernel_density(PointPattern(Window::unit()), 0.0, 8, 8), ConfigError);
  CHECK(default_bandwidth(sample_poisson(500, Window::unit(), RngSeed{1})) > 0.0);
}

TEST_CASE("classify_pattern") {
  SUBCASE("tight clusters are clustered") {
    std::vector<Point> p;
    for (int c = 0; c < 10; ++c) {
      for (int k = 0; k < 10; ++k) p.push_back({0.05 + 0.1 * c + 0.001 * k, 0.5 + 0.09 * (c % 5 - 2) + 0.0007 * k});
    }
    CHECK(classify_pattern(PointPattern(Window::unit(), p)) == InteractionVerdict::Clustered);
  }
  SUBCASE("a lattice crosses the diagonal and is neither") {
    // L is 0 below the spacing and jumps above r once the four lattice
    // neighbours are counted.
    std::vector<Point> p;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) p.push_back({(i + 0.5) / 12.0, (j + 0.5) / 12.0});
    const PointPattern pattern(Window::unit(), p);
    const auto grid = classification_grid(pattern, {});
    const auto l = l_function(pattern, grid);
    bool above = false, below = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      above = above || l.values[i] > grid[i];
      below = below || l.values[i] < grid[i];
    }
    REQUIRE(above);
    REQUIRE(below);
    CHECK(classify_pattern(pattern) == InteractionVerdict::Neither);
  }
  SUBCASE("grid starts where CSR expects the requested pair count") {
    const auto p = sample_poisson(150, Window::unit(), RngSeed{2});
    const auto grid = classification_grid(p, {});
    const double n = static_cast<double>(p.size());
    CHECK(n * (n - 1) * std::numbers::pi * grid.front() * grid.front() / 2.0 == doctest::Approx(16.0));
    CHECK(grid.back() == doctest::Approx(0.15));
    ClassifyOptions plain;
    plain.min_expected_pairs = 0;
    CHECK(classification_grid(p, plain) == open_grid(0.15, 64));
  }
}

TEST_CASE("survey_subregions") {
  SurveyOptions options;
  options.n_subregions = 300;
  SUBCASE("poisson field is mostly neither") {
    const auto field = sample_poisson(237.24 * 0.7, Window(0, 4, 0, 4), RngSeed{14});
    const auto r = survey_subregions(field, options, RngSeed{15});
    CHECK(r.complete);
    CHECK(r.clustered_fraction < 0.15);
    CHECK(r.repulsive_fraction < 0.15);
    CHECK(r.clustered_fraction + r.repulsive_fraction + r.neither_fraction == doctest::Approx(1.0));
  }
  SUBCASE("matern cluster field is mostly clustered") {
    const auto field = tile(family::MaternCluster{162.48, 0.067, 1.61}, 4, RngSeed{16});
    const auto r = survey_subregions(field, options, RngSeed{17});
    CHECK(r.clustered_fraction > 0.6);
    CHECK(r.repulsive_fraction < 0.05);
  }
  SUBCASE("deterministic for a seed") {
    const auto field = sample_poisson(200, Window(0, 3, 0, 3), RngSeed{18});
    options.n_subregions = 50;
    const auto a = survey_subregions(field, options, RngSeed{3});
    const auto b = survey_subregions(field, options, RngSeed{3});
    CHECK(a.clustered_fraction == b.clustered_fraction);
    CHECK(a.attempts == b.attempts);
  }
  SUBCASE("impossible count range reports an incomplete survey") {
    const auto field = sample_poisson(5, Window(0, 2, 0, 2), RngSeed{19});
    options.n_subregions = 5;
    options.retry_factor = 10;
    const auto r = survey_subregions(field, options, RngSeed{1});
    CHECK_FALSE(r.complete);
    CHECK(r.classified == 0);
    CHECK(r.attempts == 50);
  }
}

}  // TEST_SUITE

TEST_SUITE("calibration") {

TEST_CASE("strauss hard core simulations are mostly classified repulsive") {
  const ModelSpec sh = family::StraussHardCore{237.24, 0.5, 0.03, 0.015};
  int repulsive = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    repulsive += classify_pattern(simulate(sh, Window::unit(), derive_seed(RngSeed{13}, s))) ==
                 InteractionVerdict::Repulsive;
  }
  MESSAGE("repulsive in " << repulsive << " of 200");
  CHECK(repulsive >= 160);
}

}  // TEST_SUITE
