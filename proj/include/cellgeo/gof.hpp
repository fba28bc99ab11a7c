#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cellgeo/models.hpp"
#include "cellgeo/radio.hpp"
#include "cellgeo/random.hpp"
#include "cellgeo/sim.hpp"
#include "cellgeo/stats.hpp"

namespace cellgeo {

// The curve computed for the observed and each simulated pattern. For the
// coverage statistic, user positions and fading draws come from `seed`, so
// the statistic is one fixed function of the pattern.
struct StatisticSpec {
  CurveKind kind = CurveKind::L;
  ChannelConfig channel;
  UserPlacement placement;
  RngSeed seed;
};

SummaryCurve evaluate_statistic(const StatisticSpec& statistic, const PointPattern& pattern,
                                std::span<const double> grid);

// Pointwise envelope: lower is the nrank-th smallest and upper the nrank-th
// largest simulated value at each grid point, so alpha = 2 nrank / (nsim + 1).
struct Envelope {
  CurveKind kind = CurveKind::L;
  std::vector<double> grid;
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t nsim = 0;
  std::size_t nrank = 0;
  double alpha = 0.0;
};

inline double envelope_alpha(std::size_t nsim, std::size_t nrank) {
  return 2.0 * static_cast<double>(nrank) / (1.0 + static_cast<double>(nsim));
}

struct EnvelopeOptions {
  McmcConfig mcmc;
  // Largest fraction of simulations allowed to leave a grid point undefined.
  double max_missing_fraction = 0.10;
};

// Simulates nsim patterns from the fitted model on its fit window, replicate
// i seeded with derive_seed(seed, i).
Envelope build_envelope(const FittedModel& model, const StatisticSpec& statistic,
                        std::span<const double> grid, std::size_t nsim, std::size_t nrank,
                        RngSeed seed, const EnvelopeOptions& options = {});

struct EnvelopeRequest {
  StatisticSpec statistic;
  std::vector<double> grid;
};

// Several statistics evaluated on one shared set of simulated patterns.
std::vector<Envelope> build_envelopes(const FittedModel& model, std::span<const EnvelopeRequest> requests,
                                      std::size_t nsim, std::size_t nrank, RngSeed seed,
                                      const EnvelopeOptions& options = {});

// Ranks precomputed simulated curves (one row per simulation).
Envelope envelope_from_curves(CurveKind kind, std::span<const double> grid,
                              const std::vector<std::vector<double>>& curves, std::size_t nrank,
                              double max_missing_fraction = 0.10);

struct ExceedanceInterval {
  double from = 0.0;
  double to = 0.0;
  bool above = true;  // observed above the upper band (else below the lower)
};

struct TestReport {
  CurveKind kind = CurveKind::L;
  bool rejected = false;
  std::vector<ExceedanceInterval> exceedance_intervals;
};

TestReport test_curve(const SummaryCurve& observed, const Envelope& envelope);

}  // namespace cellgeo
