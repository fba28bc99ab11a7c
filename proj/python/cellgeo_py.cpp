#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cellgeo/error.hpp"
#include "cellgeo/fit.hpp"
#include "cellgeo/gof.hpp"
#include "cellgeo/io.hpp"
#include "cellgeo/pipeline.hpp"
#include "cellgeo/radio.hpp"
#include "cellgeo/sim.hpp"
#include "cellgeo/stats.hpp"

namespace py = pybind11;
using namespace cellgeo;

namespace {

PointPattern make_pattern(const Window& window, py::array_t<double, py::array::c_style | py::array::forcecast> xy) {
  if (xy.size() == 0) return PointPattern(window);
  if (xy.ndim() != 2 || xy.shape(1) != 2) throw ConfigError("points must be an (n, 2) array");
  std::vector<Point> points(static_cast<std::size_t>(xy.shape(0)));
  const auto r = xy.unchecked<2>();
  for (py::ssize_t i = 0; i < xy.shape(0); ++i) points[i] = {r(i, 0), r(i, 1)};
  return PointPattern(window, std::move(points));
}

py::array_t<double> points_array(const PointPattern& p) {
  py::array_t<double> out({static_cast<py::ssize_t>(p.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < p.size(); ++i) {
    w(i, 0) = p[i].x;
    w(i, 1) = p[i].y;
  }
  return out;
}

ModelSpec spec_from(const std::string& text) { return io::model_from_json(io::json::parse(text)); }

FittedModel fitted_from(const std::string& text) { return io::fitted_from_json(io::json::parse(text)); }

ChannelConfig channel_from(double alpha, double noise, double sigma_db, bool rayleigh, double tx_power) {
  ChannelConfig c;
  c.path_loss_alpha = alpha;
  c.noise = noise;
  c.shadowing_sigma_db = sigma_db;
  c.rayleigh = rayleigh;
  c.tx_power = tx_power;
  return c;
}

}  // namespace

PYBIND11_MODULE(_cellgeo, m) {
  m.doc() = "Spatial point-process analysis of base-station deployments";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<DataError>(m, "DataError", error);
  py::register_exception<NumericalError>(m, "NumericalError", error);

  py::class_<Window>(m, "Window")
      .def(py::init<double, double, double, double>(), py::arg("x_min"), py::arg("x_max"), py::arg("y_min"),
           py::arg("y_max"))
      .def_static("unit", &Window::unit)
      .def_property_readonly("x_min", &Window::x_min)
      .def_property_readonly("x_max", &Window::x_max)
      .def_property_readonly("y_min", &Window::y_min)
      .def_property_readonly("y_max", &Window::y_max)
      .def_property_readonly("area", &Window::area)
      .def("__eq__", [](const Window& a, const Window& b) { return a == b; })
      .def("__repr__", [](const Window& w) {
        return "Window(" + io::format_double(w.x_min()) + ", " + io::format_double(w.x_max()) + ", " +
               io::format_double(w.y_min()) + ", " + io::format_double(w.y_max()) + ")";
      });

  py::class_<PointPattern>(m, "PointPattern")
      .def(py::init(&make_pattern), py::arg("window"), py::arg("points"))
      .def_property_readonly("window", &PointPattern::window)
      .def_property_readonly("points", &points_array)
      .def_property_readonly("intensity", &PointPattern::intensity)
      .def("__len__", &PointPattern::size)
      .def("to_csv", [](const PointPattern& p) { return io::pattern_to_csv(p); });

  py::class_<SummaryCurve>(m, "SummaryCurve")
      .def_property_readonly("kind", [](const SummaryCurve& c) { return std::string(curve_kind_name(c.kind)); })
      .def_readonly("grid", &SummaryCurve::grid)
      .def_readonly("values", &SummaryCurve::values)
      .def_readonly("warnings", &SummaryCurve::warnings);

  py::class_<Envelope>(m, "Envelope")
      .def_property_readonly("kind", [](const Envelope& e) { return std::string(curve_kind_name(e.kind)); })
      .def_readonly("grid", &Envelope::grid)
      .def_readonly("lower", &Envelope::lower)
      .def_readonly("upper", &Envelope::upper)
      .def_readonly("nsim", &Envelope::nsim)
      .def_readonly("nrank", &Envelope::nrank)
      .def_readonly("alpha", &Envelope::alpha);

  py::class_<ExceedanceInterval>(m, "ExceedanceInterval")
      .def_readonly("start", &ExceedanceInterval::from)
      .def_readonly("end", &ExceedanceInterval::to)
      .def_readonly("above", &ExceedanceInterval::above);

  py::class_<TestReport>(m, "TestReport")
      .def_readonly("rejected", &TestReport::rejected)
      .def_readonly("exceedance_intervals", &TestReport::exceedance_intervals);

  m.def("rescale_to_unit", &rescale_to_unit, py::arg("pattern"));
  m.def("read_pattern", [](const std::filesystem::path& path, const std::string& mode) {
    return io::ingest(path, io::parse_mode(mode)).pattern;
  }, py::arg("path"), py::arg("mode") = "planar");

  m.def("sample_poisson", [](double lambda, const Window& w, std::uint64_t seed) {
    return sample_poisson(lambda, w, RngSeed{seed});
  }, py::arg("lam"), py::arg("window"), py::arg("seed"));
  m.def("_simulate", [](const std::string& model, const Window& w, std::uint64_t seed, std::uint64_t steps) {
    McmcConfig config;
    if (steps > 0) config.n_steps = steps;
    return simulate(spec_from(model), w, RngSeed{seed}, config);
  }, py::arg("model"), py::arg("window"), py::arg("seed"), py::arg("steps") = 0);

  m.def("g_function", [](const PointPattern& p, const std::vector<double>& grid) { return g_function(p, grid); },
        py::arg("pattern"), py::arg("grid"));
  m.def("k_function", [](const PointPattern& p, const std::vector<double>& grid) { return k_function(p, grid); },
        py::arg("pattern"), py::arg("grid"));
  m.def("l_function", [](const PointPattern& p, const std::vector<double>& grid) { return l_function(p, grid); },
        py::arg("pattern"), py::arg("grid"));
  m.def("classify", [](const PointPattern& p, double interval_max) {
    ClassifyOptions options;
    options.interval_max = interval_max;
    return std::string(verdict_name(classify_pattern(p, options)));
  }, py::arg("pattern"), py::arg("interval_max") = 0.15);

  m.def("_fit", [](const PointPattern& p, const std::string& family) {
    return io::fitted_to_json(fit_family(p, parse_family(family), PipelineConfig{})).dump();
  }, py::arg("pattern"), py::arg("family"));

  m.def("_envelope", [](const std::string& fitted, const std::string& statistic, const std::vector<double>& grid,
                        std::size_t nsim, std::size_t nrank, std::uint64_t seed) {
    StatisticSpec spec;
    spec.kind = parse_curve_kind(statistic);
    spec.seed = derive_seed(RngSeed{seed}, 0);
    return build_envelope(fitted_from(fitted), spec, grid, nsim, nrank, derive_seed(RngSeed{seed}, 1));
  }, py::arg("fitted"), py::arg("statistic"), py::arg("grid"), py::arg("nsim"), py::arg("nrank"), py::arg("seed"));
  m.def("envelope_alpha", &envelope_alpha, py::arg("nsim"), py::arg("nrank"));
  m.def("test_curve", &test_curve, py::arg("observed"), py::arg("envelope"));

  m.def("sinr_at_user", [](const PointPattern& p, double x, double y, std::uint64_t seed, double alpha, double noise,
                           double sigma_db, bool rayleigh, double tx_power) {
    return sinr_at_user(p, {x, y}, channel_from(alpha, noise, sigma_db, rayleigh, tx_power), RngSeed{seed});
  }, py::arg("pattern"), py::arg("x"), py::arg("y"), py::arg("seed") = 1, py::arg("alpha") = 4.0,
        py::arg("noise") = 0.0, py::arg("sigma_db") = 0.0, py::arg("rayleigh") = true, py::arg("tx_power") = 1.0);
  m.def("coverage_curve", [](const PointPattern& p, const std::vector<double>& thresholds_db, std::size_t users,
                             std::uint64_t seed, double alpha, double noise, double sigma_db, bool rayleigh) {
    UserPlacement placement;
    placement.n_users = users;
    return coverage_curve(p, thresholds_db, placement, channel_from(alpha, noise, sigma_db, rayleigh, 1.0),
                          RngSeed{seed});
  }, py::arg("pattern"), py::arg("thresholds_db"), py::arg("users") = 1000, py::arg("seed") = 1,
        py::arg("alpha") = 4.0, py::arg("noise") = 0.0, py::arg("sigma_db") = 0.0, py::arg("rayleigh") = true);

  m.def("_run_pipeline", [](const std::filesystem::path& input, const std::filesystem::path& out_dir,
                            const std::string& mode, const std::vector<std::string>& families, std::size_t nsim,
                            std::size_t nrank, std::uint64_t seed) {
    PipelineConfig config;
    config.input = input;
    config.out_dir = out_dir;
    config.mode = io::parse_mode(mode);
    config.families.clear();
    for (const auto& f : families) config.families.push_back(parse_family(f));
    config.nsim = nsim;
    config.nrank = nrank;
    config.seed = RngSeed{seed};
    const auto result = run_pipeline(config);
    std::vector<std::string> kept;
    for (const Family f : result.not_rejected) kept.emplace_back(family_name(f));
    return py::make_tuple(std::string(verdict_name(result.verdict)), kept);
  }, py::arg("input"), py::arg("out_dir"), py::arg("mode"), py::arg("families"), py::arg("nsim"), py::arg("nrank"),
        py::arg("seed"));
}
