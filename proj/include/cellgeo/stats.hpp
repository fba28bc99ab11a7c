#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cellgeo/core.hpp"
#include "cellgeo/random.hpp"

namespace cellgeo {

enum class CurveKind { G, K, L, Coverage };

std::string_view curve_kind_name(CurveKind kind) noexcept;
CurveKind parse_curve_kind(std::string_view name);

// Statistic values on an ascending grid. Undefined entries are NaN and are
// written as missing by the serializers.
struct SummaryCurve {
  CurveKind kind = CurveKind::L;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<std::string> warnings;

  bool defined(std::size_t i) const { return !std::isnan(values[i]); }
};

// Evenly spaced grid of n values over (0, upper]: upper/n, 2 upper/n, ..., upper.
std::vector<double> open_grid(double upper, std::size_t n);
// n evenly spaced values from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

// Reduced-sample (border-corrected) nearest-neighbour distribution function.
SummaryCurve g_function(const PointPattern& pattern, std::span<const double> grid);

// Ripley's K with translation edge correction, lambda^2 estimated by
// N(N-1)/|W|^2. Grid values above a quarter of the shorter side are still
// computed but flagged in `warnings`.
SummaryCurve k_function(const PointPattern& pattern, std::span<const double> grid);

// L(r) = sqrt(K(r) / pi).
SummaryCurve l_function(const PointPattern& pattern, std::span<const double> grid);
SummaryCurve l_from_k(const SummaryCurve& k);

// Kernel intensity estimate on an nx-by-ny grid of cells. Each cell holds the
// mean of the estimate over the cell (row-major, row 0 at y_min).
struct DensityMap {
  Window window = Window::unit();
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;

  double cell_area() const {
    return window.area() / static_cast<double>(nx * ny);
  }
  double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }
  Point cell_center(std::size_t ix, std::size_t iy) const;
};

// Scott-type rule sigma * N^(-1/6), sigma the pooled coordinate standard
// deviation; falls back to a tenth of the shorter side for tiny patterns.
double default_bandwidth(const PointPattern& pattern);

// Isotropic Gaussian kernel with reflection at the window edges. Reflection
// is applied with the full image series, so the map integrates to N(x).
DensityMap kernel_density(const PointPattern& pattern, double bandwidth, std::size_t nx,
                          std::size_t ny);

enum class InteractionVerdict { Clustered, Repulsive, Neither };

std::string_view verdict_name(InteractionVerdict v) noexcept;

struct ClassifyOptions {
  double interval_max = 0.15;
  std::size_t grid_points = 64;
  // The grid starts at the distance where a CSR pattern of the same size
  // expects this many r-close pairs (16 pairs is four times the smallest
  // nonzero value L can take). Below it L is 0 or a one-pair jump and says
  // nothing about interaction. 0 gives the plain grid over (0, interval_max].
  double min_expected_pairs = 16.0;
};

// Distances at which classify_pattern evaluates L for this pattern.
std::vector<double> classification_grid(const PointPattern& pattern, const ClassifyOptions& options);

// Clustered if L(r) >= r on every grid point, Repulsive if L(r) <= r on every
// grid point, Neither otherwise.
InteractionVerdict classify_pattern(const PointPattern& pattern, const ClassifyOptions& options = {});

struct SurveyOptions {
  std::size_t n_subregions = 10'000;
  std::size_t count_min = 60;
  std::size_t count_max = 220;
  // Side range of the random squares; <= 0 means derive from the average
  // intensity so expected counts span [count_min, count_max].
  double side_min = 0.0;
  double side_max = 0.0;
  ClassifyOptions classify;
  // Attempts allowed per requested subregion.
  std::size_t retry_factor = 100;
};

struct SurveyResult {
  double clustered_fraction = 0.0;
  double repulsive_fraction = 0.0;
  double neither_fraction = 0.0;
  std::size_t classified = 0;
  std::size_t attempts = 0;
  bool complete = false;
  double side_min = 0.0;
  double side_max = 0.0;
};

SurveyResult survey_subregions(const PointPattern& pattern, const SurveyOptions& options,
                               RngSeed seed);

}  // namespace cellgeo
