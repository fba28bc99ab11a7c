#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cellgeo/core.hpp"
#include "cellgeo/random.hpp"
#include "cellgeo/stats.hpp"

namespace cellgeo {

// Downlink channel: equal transmit power, power-law path loss, Rayleigh
// fading and lognormal shadowing (both optional), additive noise.
struct ChannelConfig {
  double tx_power = 1.0;
  double path_loss_alpha = 4.0;
  double noise = 0.0;
  // Shadowing standard deviation in dB; 0 disables shadowing.
  double shadowing_sigma_db = 0.0;
  bool rayleigh = true;

  void validate() const;
};

// Shadowing deviation used when shadowing is switched on without a value.
inline constexpr double kDefaultShadowingSigmaDb = 8.0;

struct UserPlacement {
  std::size_t n_users = 1000;
  // Users are uniform in the centred sub-window covering this fraction of
  // each axis.
  double region_fraction = 2.0 / 3.0;

  void validate() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Index of the nearest station to `user`.
std::size_t serving_station(std::span<const Point> stations, Point user);

// SINR with explicit per-station gains h_i (one per station).
double sinr_with_gains(std::span<const Point> stations, Point user, std::span<const double> gains,
                       const ChannelConfig& channel);

// Draws the fading/shadowing gain for each of n stations.
std::vector<double> draw_gains(std::size_t n, const ChannelConfig& channel, Rng& rng);

// SINR for a user served by its nearest station, with fresh gains drawn from
// `seed`. Throws DataError if the pattern is empty or the user sits on a station.
double sinr_at_user(const PointPattern& pattern, Point user, const ChannelConfig& channel,
                    RngSeed seed);

// Fraction of users with SINR > T for each threshold T in dB.
SummaryCurve coverage_curve(const PointPattern& pattern, std::span<const double> thresholds_db,
                            const UserPlacement& placement, const ChannelConfig& channel,
                            RngSeed seed);

}  // namespace cellgeo
