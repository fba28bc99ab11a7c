#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellgeo/core.hpp"
#include "cellgeo/error.hpp"
#include "cellgeo/models.hpp"
#include "cellgeo/stats.hpp"

namespace cellgeo {

// Optimizer ran out of budget; carries the last iterate.
class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, ModelSpec last_iterate)
      : NumericalError(what), last_iterate_(std::move(last_iterate)) {}
  const ModelSpec& last_iterate() const noexcept { return last_iterate_; }

 private:
  ModelSpec last_iterate_;
};

// Data violate the hard core implied by the fixed irregular parameters.
class InfeasibleFit : public DataError {
 public:
  using DataError::DataError;
};

// Berman-Turner quadrature: the data points followed by a regular grid of
// dummy points, with counting-measure weights (tile area divided by the
// number of quadrature points in the tile). Weights sum to the window area.
struct QuadratureScheme {
  Window window = Window::unit();
  std::vector<Point> points;
  std::vector<double> weights;
  std::size_t n_data = 0;
};

// dummy_per_side = 0 picks 4 * ceil(sqrt(N)).
QuadratureScheme make_quadrature(const PointPattern& data, std::size_t dummy_per_side = 0);

struct IrregularParameters {
  std::optional<double> r;
  std::optional<double> hc;
  std::optional<std::uint32_t> sat;
};

struct ProfileGrid {
  std::vector<double> r;
  std::vector<double> hc;
  std::vector<std::uint32_t> sat;
};

struct MplOptions {
  std::size_t max_iterations = 100;
  double gradient_tolerance = 1e-8;
};

FittedModel fit_poisson(const PointPattern& pattern);

// Log pseudolikelihood of `spec` approximated on the quadrature:
// sum_data log lambda(x_i | x \ x_i) - sum_j w_j lambda(u_j | x).
double log_pseudolikelihood(const ModelSpec& spec, const QuadratureScheme& quad);

// Maximum pseudolikelihood over (log beta, log gamma) with the irregular
// parameters held fixed. Strauss-type gamma is constrained to [0, 1]; the
// unconstrained optimum is kept in the diagnostics when it differs.
FittedModel fit_mpl(const PointPattern& pattern, Family family, const IrregularParameters& fixed,
                    const QuadratureScheme& quad, const MplOptions& options = {});

// Profile pseudolikelihood: fit_mpl at every grid combination, keep the best.
// Ties go to the smallest r, then sat, then hc.
FittedModel fit_profile(const PointPattern& pattern, Family family, const ProfileGrid& grid,
                        const QuadratureScheme& quad, const MplOptions& options = {});

// Matern cluster K-function, pi t^2 + h(t / 2r) / kappa, where h is the
// distance CDF of two uniform points in a disc of radius r.
double matern_cluster_k(double t, double kappa, double r);

struct ContrastOptions {
  // Integration grid for the contrast; empty picks 64 points over
  // [0.01, 0.25] times the shorter window side.
  std::vector<double> t_grid;
  std::size_t max_evaluations = 2000;
  double exponent = 0.25;
};

// Minimum-contrast objective: trapezoid integral over t_grid of
// (K_hat^q - K_mcp^q)^2.
double matern_contrast(const SummaryCurve& k_hat, double kappa, double r, double exponent = 0.25);

// Minimum-contrast fit of (kappa, r); mu = N / (kappa |W|).
FittedModel fit_matern_cluster(const PointPattern& pattern, const ContrastOptions& options = {});

}  // namespace cellgeo
