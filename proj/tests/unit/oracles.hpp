#pragma once

// Brute-force reference implementations used as test oracles. They follow the
// textbook definitions directly and share no code with the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "cellgeo/core.hpp"

namespace oracle {

struct Box {
  double x0, x1, y0, y1;
};

inline Box box(const cellgeo::Window& w) { return {w.x_min(), w.x_max(), w.y_min(), w.y_max()}; }

inline double dist(cellgeo::Point a, cellgeo::Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline long pair_count(const std::vector<cellgeo::Point>& p, double r) {
  long c = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (i < j && dist(p[i], p[j]) <= r) ++c;
  return c;
}

inline std::vector<double> nn(const std::vector<cellgeo::Point>& p) {
  std::vector<double> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p.size(); ++j)
      if (i != j) best = std::min(best, dist(p[i], p[j]));
    out.push_back(best);
  }
  return out;
}

// Translation-corrected K over ordered pairs with lambda^2 = N(N-1)/|W|^2.
inline double k_translation(const std::vector<cellgeo::Point>& p, Box w, double r) {
  const double area = (w.x1 - w.x0) * (w.y1 - w.y0);
  const double n = static_cast<double>(p.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i == j || dist(p[i], p[j]) > r) continue;
      const double ox = (w.x1 - w.x0) - std::fabs(p[i].x - p[j].x);
      const double oy = (w.y1 - w.y0) - std::fabs(p[i].y - p[j].y);
      sum += area / (ox * oy);
    }
  return area * sum / (n * (n - 1.0));
}

// Reduced-sample G: among points at least r from the boundary, the fraction
// whose nearest neighbour is within r.
inline double g_reduced_sample(const std::vector<cellgeo::Point>& p, Box w, double r) {
  const auto d = nn(p);
  int kept = 0, hit = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double b = std::min({p[i].x - w.x0, w.x1 - p[i].x, p[i].y - w.y0, w.y1 - p[i].y});
    if (b < r) continue;
    ++kept;
    if (d[i] <= r) ++hit;
  }
  return kept == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(hit) / kept;
}

// SINR of a user served by its nearest station, straight from the definition.
inline double sinr(const std::vector<cellgeo::Point>& bs, cellgeo::Point u, const std::vector<double>& h,
                   double power, double alpha, double noise) {
  std::size_t serve = 0;
  for (std::size_t i = 1; i < bs.size(); ++i)
    if (dist(bs[i], u) < dist(bs[serve], u)) serve = i;
  double signal = 0.0, interference = 0.0;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const double rx = power * h[i] * std::pow(dist(bs[i], u), -alpha);
    if (i == serve) signal = rx;
    else interference += rx;
  }
  return signal / (noise + interference);
}

// Interference-limited Rayleigh coverage of an infinite Poisson network, alpha = 4.
inline double poisson_coverage_alpha4(double t_linear) {
  const double s = std::sqrt(t_linear);
  return 1.0 / (1.0 + s * (std::numbers::pi / 2.0 - std::atan(1.0 / s)));
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double std_error(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Monte Carlo coverage of a Poisson(lambda) network on the unit square with
// Rayleigh fading, no noise and path-loss exponent 4: the fraction of
// (pattern, user) draws with SINR > t_linear, users uniform in the central
// two-thirds square. Uses the standard library generators only.
inline double poisson_coverage_monte_carlo(double lambda, double t_linear, int n_patterns, int users_per_pattern,
                                           unsigned long long seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> centre(1.0 / 6.0, 5.0 / 6.0);
  std::exponential_distribution<double> fading(1.0);
  long covered = 0, total = 0;
  for (int p = 0; p < n_patterns; ++p) {
    const int n = std::poisson_distribution<int>(lambda)(gen);
    if (n == 0) continue;
    std::vector<cellgeo::Point> bs(n);
    for (auto& b : bs) b = {unit(gen), unit(gen)};
    for (int u = 0; u < users_per_pattern; ++u) {
      const cellgeo::Point user{centre(gen), centre(gen)};
      std::vector<double> h(bs.size());
      for (auto& x : h) x = fading(gen);
      covered += sinr(bs, user, h, 1.0, 4.0, 0.0) > t_linear;
      ++total;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(total);
}

}  // namespace oracle
