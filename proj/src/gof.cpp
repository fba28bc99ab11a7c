#include "cellgeo/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cellgeo/error.hpp"

namespace cellgeo {

SummaryCurve evaluate_statistic(const StatisticSpec& statistic, const PointPattern& pattern,
                                std::span<const double> grid) {
  switch (statistic.kind) {
    case CurveKind::G: return g_function(pattern, grid);
    case CurveKind::K: return k_function(pattern, grid);
    case CurveKind::L: return l_function(pattern, grid);
    case CurveKind::Coverage:
      return coverage_curve(pattern, grid, statistic.placement, statistic.channel, statistic.seed);
  }
  throw ConfigError("unknown statistic");
}

Envelope envelope_from_curves(CurveKind kind, std::span<const double> grid,
                              const std::vector<std::vector<double>>& curves, std::size_t nrank,
                              double max_missing_fraction) {
  const std::size_t nsim = curves.size();
  if (nrank < 1 || nsim < 2 * nrank) {
    throw ConfigError("envelope needs nrank >= 1 and nsim >= 2 * nrank");
  }
  Envelope env{kind, {grid.begin(), grid.end()}, {}, {}, nsim, nrank, envelope_alpha(nsim, nrank)};
  env.lower.resize(grid.size());
  env.upper.resize(grid.size());
  std::vector<std::size_t> too_sparse;
  std::vector<double> column;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    column.clear();
    for (const auto& curve : curves) {
      if (!std::isnan(curve[g])) column.push_back(curve[g]);
    }
    const std::size_t missing = nsim - column.size();
    if (static_cast<double>(missing) > max_missing_fraction * static_cast<double>(nsim) ||
        column.size() < 2 * nrank) {
      too_sparse.push_back(g);
      continue;
    }
    std::sort(column.begin(), column.end());
    env.lower[g] = column[nrank - 1];
    env.upper[g] = column[column.size() - nrank];
  }
  if (!too_sparse.empty()) {
    std::ostringstream msg;
    msg << "statistic undefined in more than " << 100.0 * max_missing_fraction
        << "% of simulations at grid point(s):";
    for (const auto g : too_sparse) msg << ' ' << grid[g];
    throw NumericalError(msg.str());
  }
  return env;
}

std::vector<Envelope> build_envelopes(const FittedModel& model, std::span<const EnvelopeRequest> requests,
                                      std::size_t nsim, std::size_t nrank, RngSeed seed,
                                      const EnvelopeOptions& options) {
  if (nrank < 1 || nsim < 2 * nrank) {
    throw ConfigError("envelope needs nrank >= 1 and nsim >= 2 * nrank");
  }
  validate(model.spec);
  // curves[k][i]: statistic k on replicate i.
  std::vector<std::vector<std::vector<double>>> curves(requests.size(),
                                                       std::vector<std::vector<double>>(nsim));
  parallel_for(nsim, [&](std::size_t i) {
    const PointPattern sim = simulate(model.spec, model.fit_window, derive_seed(seed, i), options.mcmc);
    for (std::size_t k = 0; k < requests.size(); ++k) {
      try {
        curves[k][i] = evaluate_statistic(requests[k].statistic, sim, requests[k].grid).values;
      } catch (const DataError&) {
        // Too few points for the statistic: missing everywhere.
        curves[k][i].assign(requests[k].grid.size(), std::numeric_limits<double>::quiet_NaN());
      }
    }
  });
  std::vector<Envelope> out;
  out.reserve(requests.size());
  for (std::size_t k = 0; k < requests.size(); ++k) {
    out.push_back(envelope_from_curves(requests[k].statistic.kind, requests[k].grid, curves[k], nrank,
                                       options.max_missing_fraction));
  }
  return out;
}

Envelope build_envelope(const FittedModel& model, const StatisticSpec& statistic,
                        std::span<const double> grid, std::size_t nsim, std::size_t nrank,
                        RngSeed seed, const EnvelopeOptions& options) {
  const EnvelopeRequest request{statistic, std::vector<double>(grid.begin(), grid.end())};
  return build_envelopes(model, std::span<const EnvelopeRequest>(&request, 1), nsim, nrank, seed, options)
      .front();
}

TestReport test_curve(const SummaryCurve& observed, const Envelope& envelope) {
  if (observed.grid.size() != envelope.grid.size()) {
    throw ConfigError("observed curve and envelope use different grids");
  }
  for (std::size_t i = 0; i < observed.grid.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, std::fabs(envelope.grid[i]));
    if (std::fabs(observed.grid[i] - envelope.grid[i]) > tol) {
      throw ConfigError("observed curve and envelope use different grids");
    }
  }
  TestReport report{envelope.kind, false, {}};
  bool in_run = false;
  for (std::size_t i = 0; i < observed.grid.size(); ++i) {
    const double v = observed.values[i];
    const bool above = v > envelope.upper[i];
    const bool below = v < envelope.lower[i];
    if (!above && !below) {
      in_run = false;
      continue;
    }
    if (in_run && report.exceedance_intervals.back().above == above) {
      report.exceedance_intervals.back().to = observed.grid[i];
    } else {
      report.exceedance_intervals.push_back({observed.grid[i], observed.grid[i], above});
      in_run = true;
    }
  }
  report.rejected = !report.exceedance_intervals.empty();
  return report;
}

}  // namespace cellgeo
