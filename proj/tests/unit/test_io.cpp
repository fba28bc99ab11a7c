#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"

#include "cellgeo/error.hpp"
#include "cellgeo/io.hpp"
#include "cellgeo/sim.hpp"

using namespace cellgeo;
using namespace cellgeo::io;

namespace {

std::string message_of(const std::string& text, CoordinateMode mode) {
  try {
    ingest_text(text, mode);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

bool same_spec(const ModelSpec& a, const ModelSpec& b) { return model_to_json(a) == model_to_json(b); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips") {
  for (const double v : {0.0, 0.1, 1.0 / 3.0, 237.24, -1e-300, 6.02e23, std::nextafter(1.0, 2.0)}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("planar ingest") {
  const auto r = ingest_text("id,x,y\na,0,0\nb,2,1\nc,1,3\n", CoordinateMode::Planar);
  CHECK(r.pattern.size() == 3);
  CHECK(r.ids == std::vector<std::string>{"a", "b", "c"});
  CHECK(r.pattern.window() == Window(0, 2, 0, 3));
  CHECK(r.pattern[1] == Point{2, 1});
  CHECK(r.duplicate_count == 0);
}

TEST_CASE("duplicates are kept with a count") {
  const auto r = ingest_text("id,x,y\na,0,0\nb,1,1\nc,1,1\nd,0,0\n", CoordinateMode::Planar);
  CHECK(r.pattern.size() == 4);
  CHECK(r.duplicate_count == 2);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("geographic projection") {
  // Same latitude: x spacing is R * dlon * cos(lat0) in km, y is flat.
  const auto r = ingest_text("id,lon,lat\na,120.0,30.0\nb,120.1,30.0\nc,120.3,30.0\n", CoordinateMode::Geographic);
  REQUIRE(r.pattern.size() == 3);
  const double deg = std::numbers::pi / 180.0;
  const double expected = kEarthRadiusKm * 0.1 * deg * std::cos(30.0 * deg);
  CHECK(r.pattern[1].x - r.pattern[0].x == doctest::Approx(expected).epsilon(1e-9));
  CHECK(r.pattern[2].x - r.pattern[1].x == doctest::Approx(2.0 * expected).epsilon(1e-9));
  CHECK(r.pattern[0].y == doctest::Approx(0.0));
  // Centroid maps to the origin.
  CHECK(r.pattern[0].x + r.pattern[1].x + r.pattern[2].x == doctest::Approx(0.0).epsilon(1e-9));
  // Zero y-extent is widened to the x-extent.
  CHECK(r.pattern.window().height() == doctest::Approx(r.pattern.window().width()));

  const auto v = ingest_text("id,lon,lat\na,10,45.0\nb,10,45.2\n", CoordinateMode::Geographic);
  CHECK(v.pattern[1].y - v.pattern[0].y == doctest::Approx(kEarthRadiusKm * 0.2 * deg).epsilon(1e-9));
}

TEST_CASE("malformed input") {
  const auto lat = message_of("id,lon,lat\na,10,45\nb,10,95\n", CoordinateMode::Geographic);
  CHECK(lat.find("line 3") != std::string::npos);
  CHECK(lat.find("latitude") != std::string::npos);
  CHECK(message_of("id,lon,lat\na,190,45\n", CoordinateMode::Geographic).find("line 2") != std::string::npos);
  const auto fields = message_of("id,x,y\na,1,2\nb,1\nc,x,2\n", CoordinateMode::Planar);
  CHECK(fields.find("line 3") != std::string::npos);
  CHECK(fields.find("line 4") != std::string::npos);
  CHECK(message_of("id,x,y\na,nan,1\n", CoordinateMode::Planar).find("line 2") != std::string::npos);
  CHECK_FALSE(message_of("", CoordinateMode::Planar).empty());
  CHECK_FALSE(message_of("id,x,y\n", CoordinateMode::Planar).empty());
  CHECK(message_of("id,lon,lat\na,1,2\n", CoordinateMode::Planar).find("header") != std::string::npos);
  CHECK_FALSE(message_of("id,x,y\na,1,1\nb,1,1\n", CoordinateMode::Planar).empty());
  CHECK_THROWS_AS(parse_mode("utm"), ConfigError);
  CHECK(parse_mode("planar") == CoordinateMode::Planar);
  CHECK(parse_mode("geographic") == CoordinateMode::Geographic);
  CHECK_THROWS_AS(ingest("/nonexistent/cellgeo.csv", CoordinateMode::Planar), DataError);
}

TEST_CASE("pattern CSV round-trips") {
  const auto p = sample_poisson(40, Window(0.5, 2.5, -1, 1), RngSeed{1});
  const auto text = pattern_to_csv(p);
  const auto back = ingest_text(text, CoordinateMode::Planar);
  CHECK(back.pattern == p);
  CHECK(back.ids.size() == p.size());
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < p.size(); ++i) ids.push_back("bs" + std::to_string(i));
  CHECK(ingest_text(pattern_to_csv(p, ids), CoordinateMode::Planar).ids == ids);
}

TEST_CASE("curve round-trips") {
  SummaryCurve c{CurveKind::K, {0.01, 0.02, 0.1}, {0.0, 1.0 / 3.0, std::numeric_limits<double>::quiet_NaN()}, {}};
  const auto csv = curve_from_csv(curve_to_csv(c));
  CHECK(csv.kind == CurveKind::K);
  CHECK(csv.grid == c.grid);
  CHECK(csv.values[0] == c.values[0]);
  CHECK(csv.values[1] == c.values[1]);
  CHECK(std::isnan(csv.values[2]));
  const auto js = curve_from_json(json::parse(curve_to_json(c).dump()));
  CHECK(js.kind == CurveKind::K);
  CHECK(js.grid == c.grid);
  CHECK(js.values[1] == c.values[1]);
  CHECK(std::isnan(js.values[2]));
  for (const auto kind : {CurveKind::G, CurveKind::K, CurveKind::L, CurveKind::Coverage}) {
    SummaryCurve k{kind, {1.0}, {0.5}, {}};
    CHECK(curve_from_csv(curve_to_csv(k)).kind == kind);
  }
  CHECK_THROWS_AS(curve_from_csv("grid,value\n0.1,1\n"), DataError);
  CHECK_THROWS_AS(curve_from_csv("# kind: L\ngrid,value\n0.1,abc\n"), DataError);
}

TEST_CASE("density map round-trips") {
  DensityMap m;
  m.window = Window(0, 2, 0, 1);
  m.nx = 3;
  m.ny = 2;
  m.values = {1, 2, 3, 4, 5, 6.25};
  const auto back = density_from_json(json::parse(density_to_json(m).dump()));
  CHECK(back.window == m.window);
  CHECK(back.nx == 3);
  CHECK(back.ny == 2);
  CHECK(back.values == m.values);
  CHECK(window_from_json(window_to_json(m.window)) == m.window);
}

TEST_CASE("models round-trip") {
  const std::vector<ModelSpec> specs{family::Poisson{47.5},
                                     family::Strauss{200, 0.5, 0.05},
                                     family::StraussHardCore{237.24, 0.5, 0.03, 0.015},
                                     family::PoissonHardCore{173.34, 0.015},
                                     family::GeyerSaturation{182.93, 1.25, 0.03, 4},
                                     family::MaternCluster{162.48, 0.067, 1.61}};
  for (const auto& s : specs) {
    CHECK(same_spec(model_from_json(json::parse(model_to_json(s).dump())), s));
    CHECK(model_from_json(model_to_json(s)).index() == s.index());
  }
  FittedModel f{specs[4], Window(0, 1, 0, 2), {}};
  f.diagnostics.log_pseudolikelihood = -123.5;
  f.diagnostics.searched_grids["r"] = {0.01, 0.02};
  f.diagnostics.unconstrained["gamma"] = 1.7;
  f.diagnostics.data_points = 77;
  f.diagnostics.notes = {"note"};
  const auto back = fitted_from_json(json::parse(fitted_to_json(f).dump()));
  CHECK(same_spec(back.spec, f.spec));
  CHECK(back.fit_window == f.fit_window);
  CHECK(back.diagnostics.log_pseudolikelihood == f.diagnostics.log_pseudolikelihood);
  CHECK_FALSE(back.diagnostics.contrast.has_value());
  CHECK(back.diagnostics.searched_grids == f.diagnostics.searched_grids);
  CHECK(back.diagnostics.unconstrained == f.diagnostics.unconstrained);
  CHECK(back.diagnostics.data_points == 77);
  CHECK(back.diagnostics.notes == f.diagnostics.notes);
  CHECK(fitted_to_json(back) == fitted_to_json(f));
  CHECK_THROWS_AS(model_from_json(json{{"family", "nope"}}), ConfigError);
  CHECK_THROWS_AS(model_from_json(json{{"family", "strauss"}, {"beta", 1}}), ConfigError);
}

TEST_CASE("envelope and report round-trip") {
  Envelope e;
  e.kind = CurveKind::Coverage;
  e.grid = {-5, 0, 5};
  e.lower = {0.5, 0.25, 0.1};
  e.upper = {0.9, 0.7, 1.0 / 3.0};
  e.nsim = 99;
  e.nrank = 5;
  e.alpha = envelope_alpha(99, 5);
  const auto back = envelope_from_json(json::parse(envelope_to_json(e).dump()));
  CHECK(back.kind == e.kind);
  CHECK(back.grid == e.grid);
  CHECK(back.lower == e.lower);
  CHECK(back.upper == e.upper);
  CHECK(back.nsim == 99);
  CHECK(back.nrank == 5);
  CHECK(back.alpha == e.alpha);

  SummaryCurve observed{CurveKind::Coverage, e.grid, {0.6, 0.8, 0.2}, {}};
  const auto csv = envelope_to_csv(e, observed);
  CHECK(csv.find("grid,lower,upper,observed") != std::string::npos);

  TestReport r;
  r.kind = CurveKind::L;
  r.rejected = true;
  r.exceedance_intervals = {{0.1, 0.15, true}, {0.2, 0.2, false}};
  const auto rb = report_from_json(json::parse(report_to_json(r).dump()));
  CHECK(rb.kind == r.kind);
  CHECK(rb.rejected);
  REQUIRE(rb.exceedance_intervals.size() == 2);
  CHECK(rb.exceedance_intervals[0].from == 0.1);
  CHECK(rb.exceedance_intervals[0].to == 0.15);
  CHECK(rb.exceedance_intervals[0].above);
  CHECK_FALSE(rb.exceedance_intervals[1].above);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "cellgeo_io_test";
  std::filesystem::create_directories(dir);
  write_file(dir / "a.txt", "hello\n");
  CHECK(read_file(dir / "a.txt") == "hello\n");
  write_json(dir / "b.json", json{{"k", 1}});
  CHECK(json::parse(read_file(dir / "b.json"))["k"] == 1);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
