#include "cellgeo/radio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cellgeo/error.hpp"

namespace cellgeo {

namespace {

// d^-alpha from the squared distance; even integer exponents avoid pow.
double path_gain(double d2, double half_alpha) {
  if (half_alpha == 2.0) return 1.0 / (d2 * d2);
  if (half_alpha == 1.5) return 1.0 / (d2 * std::sqrt(d2));
  return std::pow(d2, -half_alpha);
}

}  // namespace

void ChannelConfig::validate() const {
  if (!(tx_power > 0.0) || !std::isfinite(tx_power)) throw ConfigError("tx_power must be positive");
  if (!(path_loss_alpha > 2.0) || !std::isfinite(path_loss_alpha)) {
    throw ConfigError("path-loss exponent must exceed 2");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("noise power must be >= 0");
  if (!(shadowing_sigma_db >= 0.0) || !std::isfinite(shadowing_sigma_db)) {
    throw ConfigError("shadowing sigma must be >= 0");
  }
}

void UserPlacement::validate() const {
  if (n_users < 1) throw ConfigError("need at least one user");
  if (!(region_fraction > 0.0 && region_fraction <= 1.0)) {
    throw ConfigError("user region fraction must lie in (0, 1]");
  }
}

std::size_t serving_station(std::span<const Point> stations, Point user) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const double d2 = squared_distance(stations[i], user);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

double sinr_with_gains(std::span<const Point> stations, Point user, std::span<const double> gains,
                       const ChannelConfig& channel) {
  if (stations.empty()) throw DataError("SINR needs at least one base station");
  const std::size_t k = serving_station(stations, user);
  const double half_alpha = 0.5 * channel.path_loss_alpha;
  const double d2k = squared_distance(stations[k], user);
  if (d2k == 0.0) throw DataError("user coincides with its serving base station");
  const double signal = channel.tx_power * gains[k] * path_gain(d2k, half_alpha);
  double interference = 0.0;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    if (i == k) continue;
    interference += channel.tx_power * gains[i] * path_gain(squared_distance(stations[i], user), half_alpha);
  }
  return signal / (channel.noise + interference);
}

std::vector<double> draw_gains(std::size_t n, const ChannelConfig& channel, Rng& rng) {
  std::vector<double> gains(n, 1.0);
  for (double& h : gains) {
    if (channel.rayleigh) h *= rng.exponential();
    if (channel.shadowing_sigma_db > 0.0) {
      h *= std::pow(10.0, channel.shadowing_sigma_db * rng.normal() / 10.0);
    }
  }
  return gains;
}

double sinr_at_user(const PointPattern& pattern, Point user, const ChannelConfig& channel,
                    RngSeed seed) {
  channel.validate();
  if (pattern.empty()) throw DataError("SINR needs at least one base station");
  if (!pattern.window().contains(user)) throw DataError("user lies outside the window");
  Rng rng(seed);
  const auto gains = draw_gains(pattern.size(), channel, rng);
  return sinr_with_gains(pattern.points(), user, gains, channel);
}

SummaryCurve coverage_curve(const PointPattern& pattern, std::span<const double> thresholds_db,
                            const UserPlacement& placement, const ChannelConfig& channel,
                            RngSeed seed) {
  channel.validate();
  placement.validate();
  if (pattern.empty()) throw DataError("coverage needs at least one base station");
  for (std::size_t i = 1; i < thresholds_db.size(); ++i) {
    if (!(thresholds_db[i] > thresholds_db[i - 1])) {
      throw ConfigError("coverage thresholds must be strictly ascending");
    }
  }
  const Window& w = pattern.window();
  const double margin = 0.5 * (1.0 - placement.region_fraction);
  const double ux0 = w.x_min() + margin * w.width();
  const double ux1 = w.x_max() - margin * w.width();
  const double uy0 = w.y_min() + margin * w.height();
  const double uy1 = w.y_max() - margin * w.height();

  // Stream 0 places users; stream 1 seeds each user's gains.
  Rng placement_rng(derive_seed(seed, 0));
  const RngSeed gain_master = derive_seed(seed, 1);
  std::vector<double> sinr(placement.n_users);
  constexpr int kMaxRedraws = 100;
  for (std::size_t u = 0; u < placement.n_users; ++u) {
    Point user{};
    int tries = 0;
    do {
      if (++tries > kMaxRedraws) throw DataError("could not place a user away from the stations");
      user = {placement_rng.uniform(ux0, ux1), placement_rng.uniform(uy0, uy1)};
    } while (squared_distance(pattern[serving_station(pattern.points(), user)], user) == 0.0);
    Rng gain_rng(derive_seed(gain_master, u));
    const auto gains = draw_gains(pattern.size(), channel, gain_rng);
    sinr[u] = sinr_with_gains(pattern.points(), user, gains, channel);
  }

  SummaryCurve curve{CurveKind::Coverage, {thresholds_db.begin(), thresholds_db.end()}, {}, {}};
  curve.values.reserve(thresholds_db.size());
  for (const double t_db : thresholds_db) {
    const double t = db_to_linear(t_db);
    const auto covered = std::count_if(sinr.begin(), sinr.end(), [t](double s) { return s > t; });
    curve.values.push_back(static_cast<double>(covered) / static_cast<double>(sinr.size()));
  }
  return curve;
}

}  // namespace cellgeo
