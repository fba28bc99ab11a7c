#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "cellgeo/error.hpp"
#include "cellgeo/sim.hpp"
#include "cellgeo/stats.hpp"

using namespace cellgeo;

namespace {

// Upper 1% point of chi-square with k degrees of freedom (Wilson-Hilferty).
double chi_square_99(double k) {
  const double z = 2.3263478740408408;
  const double a = 2.0 / (9.0 * k);
  return k * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

double poisson_pmf(double mean, int k) { return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)); }

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("sample_poisson") {
  CHECK(sample_poisson(0.0, Window::unit(), RngSeed{1}).empty());
  CHECK_THROWS_AS(sample_poisson(-1.0, Window::unit(), RngSeed{1}), ConfigError);
  CHECK(sample_poisson(300, Window::unit(), RngSeed{4}) == sample_poisson(300, Window::unit(), RngSeed{4}));

  SUBCASE("mean count") {
    std::vector<double> counts;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      counts.push_back(static_cast<double>(sample_poisson(300, Window::unit(), derive_seed(RngSeed{1}, s)).size()));
    }
    CHECK(std::fabs(oracle::mean(counts) - 300.0) < 3.0 * oracle::std_error(counts));
  }
  SUBCASE("count distribution passes chi-square at 1%") {
    const double mean = 20.0 * 0.5;  // lambda 20 on a 1 x 0.5 window
    std::map<int, int> observed;
    const int runs = 2000;
    for (int s = 0; s < runs; ++s) {
      const auto n = static_cast<int>(sample_poisson(20, Window(0, 1, 0, 0.5), RngSeed{1000u + s}).size());
      observed[std::clamp(n, 4, 17)]++;
    }
    // Bins: <=4, 5..16, >=17 keep every expected count above 5.
    double chi2 = 0.0;
    double cdf_low = 0.0;
    for (int k = 0; k <= 4; ++k) cdf_low += poisson_pmf(mean, k);
    double cdf_mid = 0.0;
    for (int k = 4; k <= 17; ++k) {
      double p;
      if (k == 4) {
        p = cdf_low;
      } else if (k == 17) {
        p = 1.0 - cdf_low - cdf_mid;
      } else {
        p = poisson_pmf(mean, k);
        cdf_mid += p;
      }
      const double expected = p * runs;
      REQUIRE(expected > 5.0);
      chi2 += (observed[k] - expected) * (observed[k] - expected) / expected;
    }
    CHECK(chi2 < chi_square_99(13.0));
  }
  SUBCASE("points are uniform over the window") {
    const auto p = sample_poisson(20000, Window(2, 4, -1, 0), RngSeed{3});
    double sx = 0, sy = 0;
    for (const Point& q : p.points()) {
      sx += q.x;
      sy += q.y;
    }
    CHECK(sx / p.size() == doctest::Approx(3.0).epsilon(0.005));
    CHECK(sy / p.size() == doctest::Approx(-0.5).epsilon(0.01));
  }
}

TEST_CASE("sample_matern_cluster") {
  CHECK(sample_matern_cluster(162.48, 0.067, 0.0, Window::unit(), RngSeed{1}).empty());

  SUBCASE("mean count is kappa mu area") {
    std::vector<double> counts;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      counts.push_back(static_cast<double>(
          sample_matern_cluster(162.48, 0.067, 1.61, Window::unit(), derive_seed(RngSeed{2}, s)).size()));
    }
    CHECK(std::fabs(oracle::mean(counts) - 162.48 * 1.61) < 3.0 * oracle::std_error(counts));
  }
  SUBCASE("daughters stay within r of their parent") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto m = sample_matern_cluster_full(50, 0.1, 4, Window::unit(), RngSeed{s});
      REQUIRE(m.daughters.size() == m.parent_of.size());
      for (std::size_t i = 0; i < m.daughters.size(); ++i) {
        CHECK(oracle::dist(m.daughters[i], m.parents[m.parent_of[i]]) <= 0.1 + 1e-12);
      }
      const Window grown = Window::unit().dilated(0.1);
      for (const Point& p : m.parents) CHECK(grown.contains(p));
      std::size_t inside = 0;
      for (const Point& d : m.daughters) inside += Window::unit().contains(d) ? 1 : 0;
      CHECK(inside == m.pattern.size());
    }
  }
}

TEST_CASE("mcmc configuration") {
  McmcConfig c;
  CHECK_NOTHROW(c.validate());
  c.p_birth = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = McmcConfig{};
  c.p_birth = 0.0;
  c.p_death = 0.0;
  c.p_shift = 1.0;
  CHECK_NOTHROW(c.validate());
  c.p_death = 0.5;
  c.p_shift = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = McmcConfig{};
  c.n_steps = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(sample_gibbs(family::MaternCluster{10, 0.1, 2}, Window::unit(), McmcConfig{}, RngSeed{1}),
                  UnsupportedFamily);
}

TEST_CASE("chain conditional intensity matches the brute-force definition") {
  const std::vector<ModelSpec> specs{family::StraussHardCore{237.24, 0.5, 0.03, 0.015},
                                     family::GeyerSaturation{100, 1.5, 0.07, 2},
                                     family::Strauss{200, 0.3, 0.05}, family::PoissonHardCore{170, 0.015},
                                     family::GeyerSaturation{30, 0.6, 0.003, 1}};
  for (const auto& spec : specs) {
    GibbsChain chain(spec, Window(0, 2, 0, 1), McmcConfig{}, RngSeed{3});
    Rng rng(RngSeed{9});
    for (int k = 0; k < 100; ++k) {
      chain.run(300);
      const Point u{rng.uniform(0, 2), rng.uniform()};
      CHECK(chain.conditional_intensity(u) ==
            doctest::Approx(papangelou(spec, std::span<const Point>(chain.state()), u)));
    }
  }
}

TEST_CASE("birth-death chain has the right stationary law") {
  // gamma = 0 with r beyond the diameter allows at most one point, so
  // P(N = 1) / P(N = 0) = beta |W| = 1.5 and P(N = 1) = 0.6.
  const ModelSpec spec = family::Strauss{1.5, 0.0, 2.0};
  McmcConfig config;
  config.initial_state = McmcConfig::InitialState::Empty;
  GibbsChain chain(spec, Window::unit(), config, RngSeed{21});
  long ones = 0, total = 0;
  for (int i = 0; i < 400000; ++i) {
    chain.step();
    REQUIRE(chain.state().size() <= 1);
    if (i % 4 == 0) {
      ones += static_cast<long>(chain.state().size());
      ++total;
    }
  }
  CHECK(static_cast<double>(ones) / total == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("strauss with gamma one behaves like poisson") {
  std::vector<double> counts, l05, l10;
  const std::vector<double> grid{0.05, 0.1};
  McmcConfig config;
  config.n_steps = 20000;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto p = sample_gibbs(family::Strauss{200, 1.0, 0.05}, Window::unit(), config, derive_seed(RngSeed{5}, s));
    counts.push_back(static_cast<double>(p.size()));
    const auto l = l_function(p, grid);
    l05.push_back(l.values[0]);
    l10.push_back(l.values[1]);
  }
  CHECK(std::fabs(oracle::mean(counts) - 200.0) < 3.0 * oracle::std_error(counts));
  CHECK(std::fabs(oracle::mean(l05) - 0.05) < 3.0 * oracle::std_error(l05));
  CHECK(std::fabs(oracle::mean(l10) - 0.10) < 3.0 * oracle::std_error(l10));
}

TEST_CASE("strauss hard core never violates the hard core") {
  const ModelSpec spec = family::StraussHardCore{237.24, 0.5, 0.03, 0.015};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = sample_gibbs(spec, Window::unit(), McmcConfig{}, RngSeed{s});
    REQUIRE(p.size() >= 2);
    CHECK(min_pair_distance(p.points()) >= 0.015);
  }
}

TEST_CASE("repulsion lowers the close-pair count") {
  std::vector<double> strauss_pairs, poisson_pairs, counts;
  McmcConfig config;
  config.n_steps = 50000;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto p = sample_gibbs(family::Strauss{200, 0.3, 0.05}, Window::unit(), config, derive_seed(RngSeed{6}, s));
    strauss_pairs.push_back(static_cast<double>(close_pair_count(p, 0.05)));
    counts.push_back(static_cast<double>(p.size()));
  }
  const double matched = oracle::mean(counts);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto p = sample_poisson(matched, Window::unit(), derive_seed(RngSeed{7}, s));
    poisson_pairs.push_back(static_cast<double>(close_pair_count(p, 0.05)));
  }
  CHECK(oracle::mean(strauss_pairs) < oracle::mean(poisson_pairs));
}

TEST_CASE("simulate dispatches by family and is deterministic") {
  const Window w(0, 2, 0, 1);
  CHECK(simulate(family::Poisson{50}, w, RngSeed{3}) == sample_poisson(50, w, RngSeed{3}));
  CHECK(simulate(family::MaternCluster{20, 0.1, 3}, w, RngSeed{3}) == sample_matern_cluster(20, 0.1, 3, w, RngSeed{3}));
  const ModelSpec geyer = family::GeyerSaturation{50, 1.4, 0.05, 2};
  CHECK(simulate(geyer, w, RngSeed{8}) == simulate(geyer, w, RngSeed{8}));
  CHECK_FALSE(simulate(geyer, w, RngSeed{8}) == simulate(geyer, w, RngSeed{9}));
}

}  // TEST_SUITE
