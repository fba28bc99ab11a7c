#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cellgeo {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Point a, Point b) noexcept;

// Axis-aligned rectangular observation window. Boundary points are inside.
class Window {
 public:
  // Throws ConfigError unless x_max > x_min and y_max > y_min (all finite).
  Window(double x_min, double x_max, double y_min, double y_max);

  static Window unit() { return Window(0.0, 1.0, 0.0, 1.0); }

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }
  double width() const noexcept { return x_max_ - x_min_; }
  double height() const noexcept { return y_max_ - y_min_; }
  double area() const noexcept { return width() * height(); }
  double diameter() const noexcept;
  double shorter_side() const noexcept;

  bool contains(Point p) const noexcept {
    return p.x >= x_min_ && p.x <= x_max_ && p.y >= y_min_ && p.y <= y_max_;
  }
  // Distance from an interior point to the nearest edge.
  double boundary_distance(Point p) const noexcept;
  // Window grown by `margin` on every side.
  Window dilated(double margin) const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  double x_min_, x_max_, y_min_, y_max_;
};

// A finite planar point set together with its observation window.
// Immutable once built; construction validates that every point is finite
// and lies in the window.
class PointPattern {
 public:
  explicit PointPattern(Window window, std::vector<Point> points = {});

  const Window& window() const noexcept { return window_; }
  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  // Intensity estimate N / |W|.
  double intensity() const noexcept { return static_cast<double>(size()) / window_.area(); }

  friend bool operator==(const PointPattern&, const PointPattern&) = default;

 private:
  Window window_;
  std::vector<Point> points_;
};

// Affine map of the pattern onto [0,1]^2, each axis scaled independently.
PointPattern rescale_to_unit(const PointPattern& pattern);

// Number of unordered pairs {i, j} with |x_i - x_j| <= r.
std::uint64_t close_pair_count(const PointPattern& pattern, double r);
std::uint64_t close_pair_count(std::span<const Point> points, double r);

// Distance from each point to its nearest other point, in point order.
// Throws DataError for fewer than two points.
std::vector<double> nn_distances(const PointPattern& pattern);
std::vector<double> nn_distances(std::span<const Point> points);

// Smallest pairwise distance, +inf for fewer than two points.
double min_pair_distance(std::span<const Point> points);

}  // namespace cellgeo
