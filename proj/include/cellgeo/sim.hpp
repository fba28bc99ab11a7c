#pragma once

#include <cstdint>
#include <vector>

#include "cellgeo/core.hpp"
#include "cellgeo/models.hpp"
#include "cellgeo/random.hpp"

namespace cellgeo {

struct McmcConfig {
  enum class InitialState { Empty, Poisson };

  std::uint64_t n_steps = 100'000;
  double p_birth = 0.4;
  double p_death = 0.4;
  double p_shift = 0.2;
  InitialState initial_state = InitialState::Poisson;

  // Throws ConfigError on invalid probabilities or a zero step count.
  void validate() const;
};

PointPattern sample_poisson(double lambda, const Window& window, RngSeed seed);

struct MaternRealization {
  std::vector<Point> parents;
  // Daughters before clipping, parent_of[i] indexing into parents.
  std::vector<Point> daughters;
  std::vector<std::size_t> parent_of;
  PointPattern pattern;  // daughters inside the window
};

// Parents are drawn on the window dilated by r so clusters near the edge are
// complete before clipping.
MaternRealization sample_matern_cluster_full(double kappa, double r, double mu,
                                             const Window& window, RngSeed seed);
PointPattern sample_matern_cluster(double kappa, double r, double mu, const Window& window,
                                   RngSeed seed);

// Metropolis-Hastings birth/death/shift chain targeting a Gibbs density on a
// window. The starting state never has zero density: the Poisson(beta)
// initial draw is thinned by rejecting points whose conditional intensity
// given the points already kept is zero.
class GibbsChain {
 public:
  GibbsChain(ModelSpec spec, Window window, McmcConfig config, RngSeed seed);

  void step();
  void run(std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) step();
  }

  const std::vector<Point>& state() const noexcept { return points_; }
  PointPattern pattern() const { return PointPattern(window_, points_); }
  std::uint64_t accepted() const noexcept { return accepted_; }
  std::uint64_t proposed() const noexcept { return proposed_; }
  // Papangelou intensity at u given the current state, via the cell index.
  double conditional_intensity(Point u) const { return conditional(u, points_.size()); }

 private:
  // Conditional intensity at u given the state without point `skip`
  // (skip >= size() keeps every point).
  double conditional(Point u, std::size_t skip) const;
  Point uniform_point();

  // Uniform cell grid over the window with cells no smaller than the
  // interaction range, so neighbour queries touch at most 3x3 cells.
  std::size_t cell_index(Point p) const;
  void insert(Point p);
  void erase(std::size_t i);
  void relocate(std::size_t i, Point p);
  template <class F>
  void for_each_near(Point u, std::size_t skip, F&& fn) const;

  ModelSpec spec_;
  Window window_;
  McmcConfig config_;
  Rng rng_;
  std::vector<Point> points_;
  double range_ = 0.0;
  std::size_t nx_ = 1;
  std::size_t ny_ = 1;
  double x_scale_ = 1.0;
  double y_scale_ = 1.0;
  std::vector<double> gamma_powers_;
  std::vector<std::vector<std::uint32_t>> cells_;
  std::vector<std::uint32_t> cell_of_;
  std::uint64_t accepted_ = 0;
  std::uint64_t proposed_ = 0;
};

PointPattern sample_gibbs(const ModelSpec& spec, const Window& window, const McmcConfig& config,
                          RngSeed seed);

// Dispatches to the exact sampler for Poisson and Matern cluster models and to
// the MCMC sampler for Gibbs families.
PointPattern simulate(const ModelSpec& spec, const Window& window, RngSeed seed,
                      const McmcConfig& config = {});

}  // namespace cellgeo
