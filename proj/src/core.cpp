#include "cellgeo/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cellgeo/error.hpp"

namespace cellgeo {

double distance(Point a, Point b) noexcept { return std::sqrt(squared_distance(a, b)); }

Window::Window(double x_min, double x_max, double y_min, double y_max)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  const bool finite = std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) &&
                      std::isfinite(y_max);
  if (!finite || !(x_max > x_min) || !(y_max > y_min)) {
    std::ostringstream msg;
    msg << "degenerate window [" << x_min << ", " << x_max << "] x [" << y_min << ", " << y_max
        << "]: both sides must have positive length";
    throw ConfigError(msg.str());
  }
}

double Window::diameter() const noexcept { return std::hypot(width(), height()); }

double Window::shorter_side() const noexcept { return std::min(width(), height()); }

double Window::boundary_distance(Point p) const noexcept {
  return std::min({p.x - x_min_, x_max_ - p.x, p.y - y_min_, y_max_ - p.y});
}

Window Window::dilated(double margin) const {
  return Window(x_min_ - margin, x_max_ + margin, y_min_ - margin, y_max_ + margin);
}

PointPattern::PointPattern(Window window, std::vector<Point> points)
    : window_(window), points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DataError("point " + std::to_string(i) + " has a non-finite coordinate");
    }
    if (!window_.contains(p)) {
      std::ostringstream msg;
      msg << "point " << i << " (" << p.x << ", " << p.y << ") lies outside the window";
      throw DataError(msg.str());
    }
  }
}

PointPattern rescale_to_unit(const PointPattern& pattern) {
  const Window& w = pattern.window();
  std::vector<Point> mapped;
  mapped.reserve(pattern.size());
  for (const Point& p : pattern.points()) {
    // Clamp guards against the last ulp pushing a boundary point outside.
    mapped.push_back({std::clamp((p.x - w.x_min()) / w.width(), 0.0, 1.0),
                      std::clamp((p.y - w.y_min()) / w.height(), 0.0, 1.0)});
  }
  return PointPattern(Window::unit(), std::move(mapped));
}

std::uint64_t close_pair_count(std::span<const Point> points, double r) {
  const double r2 = r * r;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (squared_distance(points[i], points[j]) <= r2) ++count;
    }
  }
  return count;
}

std::uint64_t close_pair_count(const PointPattern& pattern, double r) {
  return close_pair_count(pattern.points(), r);
}

std::vector<double> nn_distances(std::span<const Point> points) {
  if (points.size() < 2) {
    throw DataError("nearest-neighbour distances need at least two points");
  }
  std::vector<double> best(points.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d2 = squared_distance(points[i], points[j]);
      best[i] = std::min(best[i], d2);
      best[j] = std::min(best[j], d2);
    }
  }
  for (double& d : best) d = std::sqrt(d);
  return best;
}

std::vector<double> nn_distances(const PointPattern& pattern) {
  return nn_distances(pattern.points());
}

double min_pair_distance(std::span<const Point> points) {
  if (points.size() < 2) return std::numeric_limits<double>::infinity();
  const auto nn = nn_distances(points);
  return *std::min_element(nn.begin(), nn.end());
}

}  // namespace cellgeo
