#include "cellgeo/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include "cellgeo/error.hpp"

namespace cellgeo::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

struct Lines {
  std::vector<std::pair<std::size_t, std::string_view>> rows;  // (1-based line, text)
  std::vector<std::pair<std::string, std::string>> comments;   // "# key: value"
};

Lines scan_lines(std::string_view text) {
  Lines lines;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    const auto line = trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    ++line_no;
    if (!line.empty()) {
      if (line.front() == '#') {
        const auto body = trim(line.substr(1));
        const auto colon = body.find(':');
        if (colon != std::string_view::npos) {
          lines.comments.emplace_back(std::string(trim(body.substr(0, colon))),
                                      std::string(trim(body.substr(colon + 1))));
        }
      } else {
        lines.rows.emplace_back(line_no, line);
      }
    }
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return lines;
}

const std::string* find_comment(const Lines& lines, const std::string& key) {
  for (const auto& [k, v] : lines.comments) {
    if (k == key) return &v;
  }
  return nullptr;
}

Window parse_window_line(const std::string& value) {
  const auto fields = split(value);
  std::array<double, 4> v{};
  if (fields.size() != 4 || !std::all_of(fields.begin(), fields.end(), [&, i = 0](std::string_view f) mutable {
        return parse_double(f, v[i++]);
      })) {
    throw DataError("malformed '# window:' line: expected x_min,x_max,y_min,y_max");
  }
  return Window(v[0], v[1], v[2], v[3]);
}

double json_number(const json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

std::vector<double> json_numbers(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(json_number(v));
  return out;
}

json numbers_json(const std::vector<double>& values) {
  json out = json::array();
  for (const double v : values) {
    if (std::isnan(v)) {
      out.push_back(nullptr);
    } else {
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CoordinateMode parse_mode(const std::string& name) {
  if (name == "planar") return CoordinateMode::Planar;
  if (name == "geographic") return CoordinateMode::Geographic;
  throw ConfigError("unknown coordinate mode '" + name + "' (expected planar or geographic)");
}

IngestResult ingest_text(const std::string& text, CoordinateMode mode) {
  const Lines lines = scan_lines(text);
  if (lines.rows.empty()) throw DataError("input contains no header and no records");
  const auto header = split(lines.rows.front().second);
  const bool geographic = mode == CoordinateMode::Geographic;
  const std::vector<std::string_view> expected =
      geographic ? std::vector<std::string_view>{"id", "lon", "lat"}
                 : std::vector<std::string_view>{"id", "x", "y"};
  if (header != expected) {
    throw DataError(std::string("line ") + std::to_string(lines.rows.front().first) +
                    ": expected header '" + (geographic ? "id,lon,lat" : "id,x,y") + "'");
  }
  if (lines.rows.size() == 1) throw DataError("input has a header but no records");

  IngestResult result;
  std::vector<Point> raw;
  std::ostringstream bad;
  std::size_t bad_count = 0;
  for (std::size_t k = 1; k < lines.rows.size(); ++k) {
    const auto [line_no, row] = lines.rows[k];
    const auto fields = split(row);
    double a = 0.0, b = 0.0;
    std::string problem;
    if (fields.size() != 3) {
      problem = "expected 3 fields, got " + std::to_string(fields.size());
    } else if (!parse_double(fields[1], a) || !parse_double(fields[2], b)) {
      problem = "coordinates are not finite numbers";
    } else if (geographic && (b < -90.0 || b > 90.0)) {
      problem = "latitude outside [-90, 90]";
    } else if (geographic && (a < -180.0 || a > 180.0)) {
      problem = "longitude outside [-180, 180]";
    }
    if (!problem.empty()) {
      if (bad_count++ < 20) bad << "\n  line " << line_no << ": " << problem;
      continue;
    }
    result.ids.emplace_back(fields[0]);
    raw.push_back({a, b});
  }
  if (bad_count > 0) {
    throw DataError(std::to_string(bad_count) + " malformed record(s):" + bad.str());
  }

  std::vector<Point> points = raw;
  if (geographic) {
    double lon0 = 0.0, lat0 = 0.0;
    for (const Point& p : raw) {
      lon0 += p.x;
      lat0 += p.y;
    }
    lon0 /= static_cast<double>(raw.size());
    lat0 /= static_cast<double>(raw.size());
    constexpr double deg = std::numbers::pi / 180.0;
    const double coslat = std::cos(lat0 * deg);
    for (Point& p : points) {
      p = {kEarthRadiusKm * (p.x - lon0) * deg * coslat, kEarthRadiusKm * (p.y - lat0) * deg};
    }
  }

  std::set<std::pair<double, double>> seen;
  for (const Point& p : points) {
    if (!seen.insert({p.x, p.y}).second) ++result.duplicate_count;
  }
  if (result.duplicate_count > 0) {
    result.warnings.push_back(std::to_string(result.duplicate_count) +
                              " record(s) duplicate an earlier coordinate; kept");
  }

  const std::string* window_line = geographic ? nullptr : find_comment(lines, "window");
  if (window_line) {
    result.pattern = PointPattern(parse_window_line(*window_line), std::move(points));
    return result;
  }
  double x0 = points.front().x, x1 = x0, y0 = points.front().y, y1 = y0;
  for (const Point& p : points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double wx = x1 - x0;
  const double wy = y1 - y0;
  if (wx == 0.0 && wy == 0.0) {
    throw DataError("all records share one location; no observation window can be formed");
  }
  if (wx == 0.0) {
    x0 -= 0.5 * wy;
    x1 += 0.5 * wy;
    result.warnings.push_back("zero x-extent: window widened to the y-extent");
  }
  if (wy == 0.0) {
    y0 -= 0.5 * wx;
    y1 += 0.5 * wx;
    result.warnings.push_back("zero y-extent: window widened to the x-extent");
  }
  result.pattern = PointPattern(Window(x0, x1, y0, y1), std::move(points));
  return result;
}

IngestResult ingest(const std::filesystem::path& path, CoordinateMode mode) {
  return ingest_text(read_file(path), mode);
}

std::string pattern_to_csv(const PointPattern& pattern, const std::vector<std::string>& ids) {
  const Window& w = pattern.window();
  std::string out = "# window: " + format_double(w.x_min()) + "," + format_double(w.x_max()) + "," +
                    format_double(w.y_min()) + "," + format_double(w.y_max()) + "\nid,x,y\n";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    out += (i < ids.size() ? ids[i] : std::to_string(i + 1)) + "," + format_double(pattern[i].x) +
           "," + format_double(pattern[i].y) + "\n";
  }
  return out;
}

std::string curve_to_csv(const SummaryCurve& curve) {
  std::string out = "# kind: " + std::string(curve_kind_name(curve.kind)) + "\ngrid,value\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out += format_double(curve.grid[i]) + "," + format_double(curve.values[i]) + "\n";
  }
  return out;
}

SummaryCurve curve_from_csv(const std::string& text) {
  const Lines lines = scan_lines(text);
  SummaryCurve curve;
  const std::string* kind = find_comment(lines, "kind");
  if (!kind) throw DataError("curve CSV lacks a '# kind:' line");
  curve.kind = parse_curve_kind(*kind);
  if (lines.rows.empty() || split(lines.rows.front().second) != std::vector<std::string_view>{"grid", "value"}) {
    throw DataError("curve CSV must start with the header 'grid,value'");
  }
  for (std::size_t k = 1; k < lines.rows.size(); ++k) {
    const auto fields = split(lines.rows[k].second);
    double g = 0.0, v = kNaN;
    if (fields.size() != 2 || !parse_double(fields[0], g) || (!fields[1].empty() && !parse_double(fields[1], v))) {
      throw DataError("curve CSV line " + std::to_string(lines.rows[k].first) + " is malformed");
    }
    curve.grid.push_back(g);
    curve.values.push_back(v);
  }
  return curve;
}

json curve_to_json(const SummaryCurve& curve) {
  return json{{"kind", curve_kind_name(curve.kind)},
              {"grid", curve.grid},
              {"values", numbers_json(curve.values)},
              {"warnings", curve.warnings}};
}

SummaryCurve curve_from_json(const json& j) {
  SummaryCurve curve;
  curve.kind = parse_curve_kind(j.at("kind").get<std::string>());
  curve.grid = json_numbers(j.at("grid"));
  curve.values = json_numbers(j.at("values"));
  if (j.contains("warnings")) curve.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (curve.grid.size() != curve.values.size()) throw DataError("curve grid and values differ in length");
  return curve;
}

json window_to_json(const Window& w) {
  return json{{"x_min", w.x_min()}, {"x_max", w.x_max()}, {"y_min", w.y_min()}, {"y_max", w.y_max()}};
}

Window window_from_json(const json& j) {
  return Window(j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("y_min").get<double>(),
                j.at("y_max").get<double>());
}

json density_to_json(const DensityMap& map) {
  return json{{"window", window_to_json(map.window)}, {"nx", map.nx}, {"ny", map.ny}, {"values", map.values}};
}

DensityMap density_from_json(const json& j) {
  DensityMap map{window_from_json(j.at("window")), j.at("nx").get<std::size_t>(),
                 j.at("ny").get<std::size_t>(), j.at("values").get<std::vector<double>>()};
  if (map.values.size() != map.nx * map.ny) throw DataError("density map has the wrong number of cells");
  return map;
}

json model_to_json(const ModelSpec& spec) {
  json j{{"family", family_name(family_of(spec))}};
  std::visit(
      [&](const auto& m) {
        if constexpr (requires { m.lambda; }) j["lambda"] = m.lambda;
        if constexpr (requires { m.beta; }) j["beta"] = m.beta;
        if constexpr (requires { m.gamma; }) j["gamma"] = m.gamma;
        if constexpr (requires { m.r; }) j["r"] = m.r;
        if constexpr (requires { m.hc; }) j["hc"] = m.hc;
        if constexpr (requires { m.sat; }) j["sat"] = m.sat;
        if constexpr (requires { m.kappa; }) j["kappa"] = m.kappa;
        if constexpr (requires { m.mu; }) j["mu"] = m.mu;
      },
      spec);
  return j;
}

ModelSpec model_from_json(const json& j) {
  try {
    const Family f = parse_family(j.at("family").get<std::string>());
    auto num = [&](const char* key) { return j.at(key).get<double>(); };
    ModelSpec spec;
    switch (f) {
      case Family::Poisson: spec = family::Poisson{num("lambda")}; break;
      case Family::Strauss: spec = family::Strauss{num("beta"), num("gamma"), num("r")}; break;
      case Family::StraussHardCore:
        spec = family::StraussHardCore{num("beta"), num("gamma"), num("r"), num("hc")};
        break;
      case Family::PoissonHardCore: spec = family::PoissonHardCore{num("beta"), num("hc")}; break;
      case Family::GeyerSaturation:
        spec = family::GeyerSaturation{num("beta"), num("gamma"), num("r"), j.at("sat").get<std::uint32_t>()};
        break;
      case Family::MaternCluster: spec = family::MaternCluster{num("kappa"), num("r"), num("mu")}; break;
    }
    validate(spec);
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model JSON: ") + e.what());
  }
}

json fitted_to_json(const FittedModel& fit) {
  json j = model_to_json(fit.spec);
  j["window"] = window_to_json(fit.fit_window);
  const auto& d = fit.diagnostics;
  json diag{{"data_points", d.data_points}, {"degenerate", d.degenerate}, {"notes", d.notes}};
  diag["log_pseudolikelihood"] = d.log_pseudolikelihood ? json(*d.log_pseudolikelihood) : json(nullptr);
  diag["contrast"] = d.contrast ? json(*d.contrast) : json(nullptr);
  diag["searched_grids"] = d.searched_grids;
  diag["unconstrained"] = d.unconstrained;
  j["diagnostics"] = diag;
  return j;
}

FittedModel fitted_from_json(const json& j) {
  FittedModel fit{model_from_json(j), window_from_json(j.at("window")), {}};
  if (!j.contains("diagnostics")) return fit;
  const json& d = j.at("diagnostics");
  auto& out = fit.diagnostics;
  out.data_points = d.value("data_points", std::size_t{0});
  out.degenerate = d.value("degenerate", false);
  if (d.contains("notes")) out.notes = d.at("notes").get<std::vector<std::string>>();
  if (d.contains("log_pseudolikelihood") && !d.at("log_pseudolikelihood").is_null()) {
    out.log_pseudolikelihood = d.at("log_pseudolikelihood").get<double>();
  }
  if (d.contains("contrast") && !d.at("contrast").is_null()) out.contrast = d.at("contrast").get<double>();
  if (d.contains("searched_grids")) {
    out.searched_grids = d.at("searched_grids").get<std::map<std::string, std::vector<double>>>();
  }
  if (d.contains("unconstrained")) out.unconstrained = d.at("unconstrained").get<std::map<std::string, double>>();
  return fit;
}

json envelope_to_json(const Envelope& env) {
  return json{{"kind", curve_kind_name(env.kind)}, {"grid", env.grid},     {"lower", env.lower},
              {"upper", env.upper},                {"nsim", env.nsim},     {"nrank", env.nrank},
              {"alpha", env.alpha}};
}

Envelope envelope_from_json(const json& j) {
  Envelope env;
  env.kind = parse_curve_kind(j.at("kind").get<std::string>());
  env.grid = j.at("grid").get<std::vector<double>>();
  env.lower = j.at("lower").get<std::vector<double>>();
  env.upper = j.at("upper").get<std::vector<double>>();
  env.nsim = j.at("nsim").get<std::size_t>();
  env.nrank = j.at("nrank").get<std::size_t>();
  env.alpha = j.at("alpha").get<double>();
  return env;
}

std::string envelope_to_csv(const Envelope& env, const SummaryCurve& observed) {
  std::string out = "# kind: " + std::string(curve_kind_name(env.kind)) + "\n# nsim: " +
                    std::to_string(env.nsim) + "\n# nrank: " + std::to_string(env.nrank) +
                    "\n# alpha: " + format_double(env.alpha) + "\ngrid,lower,upper,observed\n";
  for (std::size_t i = 0; i < env.grid.size(); ++i) {
    out += format_double(env.grid[i]) + "," + format_double(env.lower[i]) + "," +
           format_double(env.upper[i]) + "," +
           (i < observed.values.size() ? format_double(observed.values[i]) : "") + "\n";
  }
  return out;
}

json report_to_json(const TestReport& report) {
  json intervals = json::array();
  for (const auto& e : report.exceedance_intervals) {
    intervals.push_back({{"from", e.from}, {"to", e.to}, {"side", e.above ? "above" : "below"}});
  }
  return json{{"kind", curve_kind_name(report.kind)},
              {"rejected", report.rejected},
              {"exceedance_intervals", intervals}};
}

TestReport report_from_json(const json& j) {
  TestReport report;
  report.kind = parse_curve_kind(j.at("kind").get<std::string>());
  report.rejected = j.at("rejected").get<bool>();
  for (const auto& e : j.at("exceedance_intervals")) {
    report.exceedance_intervals.push_back(
        {e.at("from").get<double>(), e.at("to").get<double>(), e.at("side").get<std::string>() == "above"});
  }
  return report;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << contents;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

}  // namespace cellgeo::io
