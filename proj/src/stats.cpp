#include "cellgeo/stats.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "cellgeo/error.hpp"

namespace cellgeo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Distances within a few ulps of a grid value count as lying on it, so that
// coordinates given in decimal round to the intended side of the threshold.
constexpr double kDistanceTolerance = 1.0 + 1e-12;

void check_grid(std::span<const double> grid, double upper, const char* what) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw ConfigError(std::string(what) + ": grid values must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ConfigError(std::string(what) + ": grid must be strictly ascending");
    }
  }
  if (!grid.empty() && grid.back() > upper) {
    std::ostringstream msg;
    msg << what << ": grid maximum " << grid.back() << " exceeds the window diameter " << upper;
    throw ConfigError(msg.str());
  }
}

void require_two_points(const PointPattern& pattern, const char* what) {
  if (pattern.size() < 2) {
    throw DataError(std::string(what) + " needs at least two points, got " +
                    std::to_string(pattern.size()));
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Mass of the reflected 1-D Gaussian kernel centred at x in each of n equal
// cells over [lo, hi].
std::vector<double> reflected_cell_masses(double x, double h, double lo, double hi, std::size_t n) {
  const double len = hi - lo;
  const double cell = len / static_cast<double>(n);
  // Images x + 2kL and 2lo - x + 2kL; only those within ~9h of the interval matter.
  const auto reach = static_cast<long>(std::ceil(9.0 * h / (2.0 * len))) + 1;
  std::vector<double> masses(n, 0.0);
  std::vector<double> cdf(n + 1);
  for (long k = -reach; k <= reach; ++k) {
    for (const double centre : {x + 2.0 * static_cast<double>(k) * len,
                                2.0 * lo - x + 2.0 * static_cast<double>(k) * len}) {
      if (centre + 9.0 * h < lo || centre - 9.0 * h > hi) continue;
      for (std::size_t c = 0; c <= n; ++c) {
        const double edge = c == n ? hi : lo + cell * static_cast<double>(c);
        cdf[c] = normal_cdf((edge - centre) / h);
      }
      for (std::size_t c = 0; c < n; ++c) masses[c] += cdf[c + 1] - cdf[c];
    }
  }
  return masses;
}

}  // namespace

std::string_view curve_kind_name(CurveKind kind) noexcept {
  switch (kind) {
    case CurveKind::G: return "G";
    case CurveKind::K: return "K";
    case CurveKind::L: return "L";
    case CurveKind::Coverage: return "coverage";
  }
  return "unknown";
}

CurveKind parse_curve_kind(std::string_view name) {
  if (name == "G" || name == "g") return CurveKind::G;
  if (name == "K" || name == "k") return CurveKind::K;
  if (name == "L" || name == "l") return CurveKind::L;
  if (name == "coverage") return CurveKind::Coverage;
  throw ConfigError("unknown statistic '" + std::string(name) + "' (expected G, K, L, coverage)");
}

std::vector<double> open_grid(double upper, std::size_t n) {
  if (n == 0 || !(upper > 0.0)) throw ConfigError("open_grid needs n >= 1 and upper > 0");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = upper * static_cast<double>(i + 1) / static_cast<double>(n);
  }
  return grid;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw ConfigError("linear_grid needs n >= 2 and hi > lo");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  grid.back() = hi;
  return grid;
}

SummaryCurve g_function(const PointPattern& pattern, std::span<const double> grid) {
  require_two_points(pattern, "g_function");
  check_grid(grid, pattern.window().diameter(), "g_function");
  const auto nn = nn_distances(pattern);
  std::vector<double> border(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    border[i] = pattern.window().boundary_distance(pattern[i]);
  }
  SummaryCurve curve{CurveKind::G, {grid.begin(), grid.end()}, {}, {}};
  curve.values.reserve(grid.size());
  for (const double r : grid) {
    std::size_t retained = 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < nn.size(); ++i) {
      if (border[i] < r) continue;
      ++retained;
      if (nn[i] <= r * kDistanceTolerance) ++hits;
    }
    curve.values.push_back(retained == 0 ? kNaN
                                         : static_cast<double>(hits) / static_cast<double>(retained));
  }
  return curve;
}

SummaryCurve k_function(const PointPattern& pattern, std::span<const double> grid) {
  require_two_points(pattern, "k_function");
  const Window& w = pattern.window();
  check_grid(grid, w.diameter(), "k_function");
  SummaryCurve curve{CurveKind::K, {grid.begin(), grid.end()}, {}, {}};
  if (grid.empty()) return curve;
  if (grid.back() > 0.25 * w.shorter_side()) {
    std::ostringstream msg;
    msg << "grid extends to " << grid.back() << ", beyond a quarter of the shorter window side ("
        << 0.25 * w.shorter_side() << "); estimates there are unreliable";
    curve.warnings.push_back(msg.str());
  }

  const double rmax = grid.back() * kDistanceTolerance;
  const double rmax2 = rmax * rmax;
  std::vector<std::pair<double, double>> pairs;  // (distance, translation weight)
  const auto pts = pattern.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = std::fabs(pts[i].x - pts[j].x);
      const double dy = std::fabs(pts[i].y - pts[j].y);
      const double d2 = dx * dx + dy * dy;
      if (d2 > rmax2) continue;
      pairs.emplace_back(std::sqrt(d2), w.area() / ((w.width() - dx) * (w.height() - dy)));
    }
  }
  std::sort(pairs.begin(), pairs.end());

  const double n = static_cast<double>(pattern.size());
  // Each unordered pair stands for two ordered pairs.
  const double scale = 2.0 * w.area() / (n * (n - 1.0));
  double cumulative = 0.0;
  std::size_t next = 0;
  curve.values.reserve(grid.size());
  for (const double r : grid) {
    while (next < pairs.size() && pairs[next].first <= r * kDistanceTolerance) cumulative += pairs[next++].second;
    curve.values.push_back(scale * cumulative);
  }
  return curve;
}

SummaryCurve l_from_k(const SummaryCurve& k) {
  SummaryCurve l = k;
  l.kind = CurveKind::L;
  for (double& v : l.values) {
    if (!std::isnan(v)) v = std::sqrt(v / std::numbers::pi);
  }
  return l;
}

SummaryCurve l_function(const PointPattern& pattern, std::span<const double> grid) {
  return l_from_k(k_function(pattern, grid));
}

Point DensityMap::cell_center(std::size_t ix, std::size_t iy) const {
  const double cx = window.width() / static_cast<double>(nx);
  const double cy = window.height() / static_cast<double>(ny);
  return {window.x_min() + (static_cast<double>(ix) + 0.5) * cx,
          window.y_min() + (static_cast<double>(iy) + 0.5) * cy};
}

double default_bandwidth(const PointPattern& pattern) {
  const std::size_t n = pattern.size();
  if (n < 2) return 0.1 * pattern.window().shorter_side();
  double mx = 0.0, my = 0.0;
  for (const Point& p : pattern.points()) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double ss = 0.0;
  for (const Point& p : pattern.points()) ss += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
  const double sigma = std::sqrt(ss / (2.0 * static_cast<double>(n - 1)));
  if (!(sigma > 0.0)) return 0.1 * pattern.window().shorter_side();
  return sigma * std::pow(static_cast<double>(n), -1.0 / 6.0);
}

DensityMap kernel_density(const PointPattern& pattern, double bandwidth, std::size_t nx,
                          std::size_t ny) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ConfigError("kernel_density: bandwidth must be positive");
  }
  if (nx < 2 || ny < 2) throw ConfigError("kernel_density: grid needs at least 2x2 cells");
  const Window& w = pattern.window();
  DensityMap map{w, nx, ny, std::vector<double>(nx * ny, 0.0)};
  for (const Point& p : pattern.points()) {
    const auto mx = reflected_cell_masses(p.x, bandwidth, w.x_min(), w.x_max(), nx);
    const auto my = reflected_cell_masses(p.y, bandwidth, w.y_min(), w.y_max(), ny);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      if (my[iy] == 0.0) continue;
      for (std::size_t ix = 0; ix < nx; ++ix) map.values[iy * nx + ix] += mx[ix] * my[iy];
    }
  }
  const double inv_cell = 1.0 / map.cell_area();
  for (double& v : map.values) v = std::max(0.0, v * inv_cell);
  return map;
}

std::string_view verdict_name(InteractionVerdict v) noexcept {
  switch (v) {
    case InteractionVerdict::Clustered: return "clustered";
    case InteractionVerdict::Repulsive: return "repulsive";
    case InteractionVerdict::Neither: return "neither";
  }
  return "unknown";
}

std::vector<double> classification_grid(const PointPattern& pattern, const ClassifyOptions& options) {
  require_two_points(pattern, "classify_pattern");
  if (!(options.interval_max > 0.0) || options.grid_points < 2) {
    throw ConfigError("classify_pattern: need interval_max > 0 and at least two grid points");
  }
  if (options.min_expected_pairs <= 0.0) return open_grid(options.interval_max, options.grid_points);
  // CSR expects N(N-1) pi r^2 / (2|W|) unordered pairs within r.
  const double n = static_cast<double>(pattern.size());
  double lo = std::sqrt(2.0 * options.min_expected_pairs * pattern.window().area() /
                        (std::numbers::pi * n * (n - 1.0)));
  lo = std::min(lo, 0.5 * options.interval_max);
  return linear_grid(lo, options.interval_max, options.grid_points);
}

InteractionVerdict classify_pattern(const PointPattern& pattern, const ClassifyOptions& options) {
  const auto grid = classification_grid(pattern, options);
  const SummaryCurve l = l_function(pattern, grid);
  bool clustered = true;
  bool repulsive = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (l.values[i] < grid[i]) clustered = false;
    if (l.values[i] > grid[i]) repulsive = false;
  }
  if (clustered) return InteractionVerdict::Clustered;
  if (repulsive) return InteractionVerdict::Repulsive;
  return InteractionVerdict::Neither;
}

SurveyResult survey_subregions(const PointPattern& pattern, const SurveyOptions& options,
                               RngSeed seed) {
  if (pattern.empty()) throw DataError("survey_subregions: pattern is empty");
  if (options.n_subregions == 0 || options.count_min < 2 || options.count_min > options.count_max) {
    throw ConfigError("survey_subregions: need n_subregions >= 1 and 2 <= count_min <= count_max");
  }
  const Window& w = pattern.window();
  SurveyResult result;
  result.side_min = options.side_min;
  result.side_max = options.side_max;
  if (result.side_min <= 0.0 || result.side_max <= 0.0) {
    const double lambda = pattern.intensity();
    result.side_min = std::sqrt(static_cast<double>(options.count_min) / lambda);
    result.side_max = std::sqrt(static_cast<double>(options.count_max) / lambda);
  }
  result.side_max = std::min(result.side_max, w.shorter_side());
  result.side_min = std::min(result.side_min, result.side_max);
  if (!(result.side_min > 0.0)) throw ConfigError("survey_subregions: side range must be positive");

  // Candidate squares are drawn sequentially so the accepted set depends only
  // on the seed; classification then runs in parallel.
  Rng rng(seed);
  std::vector<PointPattern> accepted;
  const std::size_t budget = options.retry_factor * options.n_subregions;
  while (accepted.size() < options.n_subregions && result.attempts < budget) {
    ++result.attempts;
    const double side = rng.uniform(result.side_min, result.side_max);
    const double x0 = rng.uniform(w.x_min(), w.x_max() - side);
    const double y0 = rng.uniform(w.y_min(), w.y_max() - side);
    const Window sub(x0, x0 + side, y0, y0 + side);
    std::vector<Point> inside;
    for (const Point& p : pattern.points()) {
      if (sub.contains(p)) inside.push_back(p);
    }
    if (inside.size() < options.count_min || inside.size() > options.count_max) continue;
    accepted.push_back(rescale_to_unit(PointPattern(sub, std::move(inside))));
  }

  std::vector<InteractionVerdict> verdicts(accepted.size());
  parallel_for(accepted.size(), [&](std::size_t i) {
    verdicts[i] = classify_pattern(accepted[i], options.classify);
  });
  result.classified = verdicts.size();
  result.complete = result.classified == options.n_subregions;
  if (result.classified == 0) return result;
  const auto total = static_cast<double>(result.classified);
  auto fraction = [&](InteractionVerdict v) {
    return static_cast<double>(std::count(verdicts.begin(), verdicts.end(), v)) / total;
  };
  result.clustered_fraction = fraction(InteractionVerdict::Clustered);
  result.repulsive_fraction = fraction(InteractionVerdict::Repulsive);
  result.neither_fraction = fraction(InteractionVerdict::Neither);
  return result;
}

}  // namespace cellgeo
