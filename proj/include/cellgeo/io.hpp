#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "cellgeo/core.hpp"
#include "cellgeo/gof.hpp"
#include "cellgeo/models.hpp"
#include "cellgeo/stats.hpp"

namespace cellgeo::io {

using nlohmann::json;

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

enum class CoordinateMode { Planar, Geographic };
CoordinateMode parse_mode(const std::string& name);

struct IngestResult {
  PointPattern pattern{Window::unit()};
  std::vector<std::string> ids;
  std::size_t duplicate_count = 0;
  std::vector<std::string> warnings;
};

inline constexpr double kEarthRadiusKm = 6371.0;

// Reads `id,x,y` (planar) or `id,lon,lat` (geographic) CSV. Geographic input
// is projected equirectangularly about the centroid into kilometres. The
// window is the data bounding box unless a `# window:` line gives one; a
// zero-extent axis is widened to the other axis' extent.
IngestResult ingest(const std::filesystem::path& path, CoordinateMode mode);
IngestResult ingest_text(const std::string& text, CoordinateMode mode);

// Pattern CSV: `# window: x_min,x_max,y_min,y_max` then `id,x,y` rows.
std::string pattern_to_csv(const PointPattern& pattern, const std::vector<std::string>& ids = {});

// Curve CSV: `# kind: <K>` then `grid,value`; missing values are empty.
std::string curve_to_csv(const SummaryCurve& curve);
SummaryCurve curve_from_csv(const std::string& text);
json curve_to_json(const SummaryCurve& curve);
SummaryCurve curve_from_json(const json& j);

json density_to_json(const DensityMap& map);
DensityMap density_from_json(const json& j);
json window_to_json(const Window& w);
Window window_from_json(const json& j);

json model_to_json(const ModelSpec& spec);
ModelSpec model_from_json(const json& j);
json fitted_to_json(const FittedModel& fit);
FittedModel fitted_from_json(const json& j);

json envelope_to_json(const Envelope& env);
Envelope envelope_from_json(const json& j);
// `grid,lower,upper,observed`.
std::string envelope_to_csv(const Envelope& env, const SummaryCurve& observed);

json report_to_json(const TestReport& report);
TestReport report_from_json(const json& j);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace cellgeo::io
