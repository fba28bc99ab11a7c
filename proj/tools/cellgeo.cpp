#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cellgeo/error.hpp"
#include "cellgeo/fit.hpp"
#include "cellgeo/gof.hpp"
#include "cellgeo/io.hpp"
#include "cellgeo/pipeline.hpp"
#include "cellgeo/radio.hpp"
#include "cellgeo/sim.hpp"
#include "cellgeo/stats.hpp"

namespace fs = std::filesystem;
using namespace cellgeo;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
}

// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw ConfigError("bad grid range '" + text + "'");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + static_cast<double>(i) * step;
    return grid;
  }
  std::vector<double> grid;
  for (const auto& p : split(text, ',')) grid.push_back(parse_number(p));
  if (grid.empty()) throw ConfigError("empty grid '" + text + "'");
  return grid;
}

std::uint32_t parse_sat(double v) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) throw ConfigError("saturation values must be positive integers");
  return static_cast<std::uint32_t>(v);
}

std::vector<Family> parse_families(const std::string& text) {
  std::vector<Family> out;
  for (const auto& name : split(text, ',')) out.push_back(parse_family(name));
  if (out.empty()) throw ConfigError("no families given");
  return out;
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::string input;
  std::string mode = "planar";
  std::string out;

  RngSeed resolve_seed() const {
    if (seed) return RngSeed{*seed};
    if (const char* env = std::getenv("CELLGEO_SEED")) {
      try {
        std::size_t used = 0;
        const std::string text(env);
        const auto v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return RngSeed{v};
      } catch (const std::exception&) {
        throw ConfigError(std::string("CELLGEO_SEED is not an unsigned integer: '") + env + "'");
      }
    }
    return RngSeed{1};
  }

  PointPattern normalized_input() const { return rescale_to_unit(io::ingest(input, io::parse_mode(mode)).pattern); }
};

struct ChannelFlags {
  double alpha = 4.0;
  double noise = 0.0;
  std::optional<double> sigma_db;
  bool shadowing = false;
  bool no_rayleigh = false;
  std::size_t users = 1000;

  void add(CLI::App* cmd) {
    cmd->add_option("--alpha-pathloss", alpha, "path-loss exponent (> 2)");
    cmd->add_option("--noise", noise, "noise power W");
    cmd->add_option("--sigma-shadow", sigma_db, "lognormal shadowing deviation in dB (enables shadowing)");
    cmd->add_flag("--shadowing", shadowing, "enable shadowing with the default 8 dB deviation");
    cmd->add_flag("--no-rayleigh", no_rayleigh, "disable Rayleigh fading");
    cmd->add_option("--users", users, "users per coverage evaluation");
  }

  ChannelConfig channel() const {
    ChannelConfig c;
    c.path_loss_alpha = alpha;
    c.noise = noise;
    c.rayleigh = !no_rayleigh;
    if (sigma_db) c.shadowing_sigma_db = *sigma_db;
    else if (shadowing) c.shadowing_sigma_db = kDefaultShadowingSigmaDb;
    c.validate();
    return c;
  }

  UserPlacement placement() const {
    UserPlacement p;
    p.n_users = users;
    p.validate();
    return p;
  }
};

struct ModelFlags {
  std::string family;
  std::string model_file;
  std::optional<double> lambda, beta, gamma, r, hc, kappa, mu;
  std::optional<std::uint32_t> sat;

  void add(CLI::App* cmd) {
    cmd->add_option("--family", family, "model family");
    cmd->add_option("--model", model_file, "fitted-model JSON (overrides --family)");
    cmd->add_option("--lambda", lambda);
    cmd->add_option("--beta", beta);
    cmd->add_option("--gamma", gamma);
    cmd->add_option("--r", r);
    cmd->add_option("--hc", hc);
    cmd->add_option("--sat", sat);
    cmd->add_option("--kappa", kappa);
    cmd->add_option("--mu", mu);
  }

  static double need(const std::optional<double>& v, const char* name) {
    if (!v) throw ConfigError(std::string("missing --") + name);
    return *v;
  }

  ModelSpec spec() const {
    ModelSpec spec = family::Poisson{0.0};
    switch (parse_family(family)) {
      case Family::Poisson: spec = family::Poisson{need(lambda, "lambda")}; break;
      case Family::Strauss:
        spec = family::Strauss{need(beta, "beta"), need(gamma, "gamma"), need(r, "r")};
        break;
      case Family::StraussHardCore:
        spec = family::StraussHardCore{need(beta, "beta"), need(gamma, "gamma"), need(r, "r"), need(hc, "hc")};
        break;
      case Family::PoissonHardCore: spec = family::PoissonHardCore{need(beta, "beta"), need(hc, "hc")}; break;
      case Family::GeyerSaturation:
        if (!sat) throw ConfigError("missing --sat");
        spec = family::GeyerSaturation{need(beta, "beta"), need(gamma, "gamma"), need(r, "r"), *sat};
        break;
      case Family::MaternCluster:
        spec = family::MaternCluster{need(kappa, "kappa"), need(r, "r"), need(mu, "mu")};
        break;
    }
    validate(spec);
    return spec;
  }
};

Window parse_window(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ConfigError("window must be x_min,x_max,y_min,y_max");
  return Window(parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2]), parse_number(parts[3]));
}

io::json json_from_file(const fs::path& path) {
  try {
    return io::json::parse(io::read_file(path));
  } catch (const io::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

int exit_code(const Error& e) {
  switch (e.category()) {
    case Error::Category::Config: return kExitConfig;
    case Error::Category::Data: return kExitData;
    case Error::Category::Numerical: return kExitNumerical;
  }
  return kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellgeo: point-process models of base-station layouts"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    auto* in = cmd->add_option("--input", common.input, "CSV with header id,x,y or id,lon,lat");
    if (needs_input) in->required();
    cmd->add_option("--mode", common.mode, "planar | geographic");
    cmd->add_option("--out", common.out, "output directory")->required();
    cmd->add_option("--seed", common.seed, "master seed (falls back to CELLGEO_SEED)");
  };

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "draw one pattern from a model");
  add_common(simulate_cmd, false);
  ModelFlags sim_model;
  sim_model.add(simulate_cmd);
  std::string sim_window = "0,1,0,1";
  std::uint64_t mcmc_steps = McmcConfig{}.n_steps;
  simulate_cmd->add_option("--window", sim_window, "x_min,x_max,y_min,y_max");
  simulate_cmd->add_option("--steps", mcmc_steps, "MCMC steps for Gibbs families");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "clustered / repulsive / neither verdict");
  add_common(classify_cmd, true);
  ClassifyOptions classify_options;
  classify_cmd->add_option("--interval-max", classify_options.interval_max);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit model families to a pattern");
  add_common(fit_cmd, true);
  std::string families_text = "poisson,geyer,matern_cluster";
  std::string r_grid_text;
  std::string sat_grid_text;
  fit_cmd->add_option("--families", families_text, "comma-separated family names");
  fit_cmd->add_option("--r-grid", r_grid_text, "interaction radii (lo:hi:step or list)");
  fit_cmd->add_option("--sat-grid", sat_grid_text, "saturation values");

  // envelope
  auto* envelope_cmd = app.add_subcommand("envelope", "Monte Carlo envelope test of a fitted model");
  add_common(envelope_cmd, true);
  ModelFlags env_model;
  env_model.add(envelope_cmd);
  ChannelFlags env_channel;
  env_channel.add(envelope_cmd);
  std::string statistic = "L";
  std::string grid_text;
  std::size_t nsim = 99;
  std::size_t nrank = 5;
  envelope_cmd->add_option("--statistic", statistic, "L | K | G | coverage");
  envelope_cmd->add_option("--grid", grid_text, "r values or thresholds in dB");
  envelope_cmd->add_option("--thresholds", grid_text, "coverage thresholds in dB");
  envelope_cmd->add_option("--nsim", nsim);
  envelope_cmd->add_option("--nrank", nrank);
  envelope_cmd->add_option("--steps", mcmc_steps, "MCMC steps for Gibbs families");

  // coverage
  auto* coverage_cmd = app.add_subcommand("coverage", "SINR coverage probability of a pattern");
  add_common(coverage_cmd, true);
  ChannelFlags cov_channel;
  cov_channel.add(coverage_cmd);
  std::string thresholds_text = "-10:20:2";
  coverage_cmd->add_option("--thresholds", thresholds_text, "thresholds in dB");

  // survey
  auto* survey_cmd = app.add_subcommand("survey", "classify random square subregions");
  add_common(survey_cmd, true);
  SurveyOptions survey_options;
  std::string region;
  survey_cmd->add_option("--region", region, "label for the output row");
  survey_cmd->add_option("--subregions", survey_options.n_subregions);
  survey_cmd->add_option("--count-min", survey_options.count_min);
  survey_cmd->add_option("--count-max", survey_options.count_max);
  survey_cmd->add_option("--interval-max", survey_options.classify.interval_max);

  // pipeline
  auto* pipeline_cmd = app.add_subcommand("pipeline", "classify, fit and test every family");
  add_common(pipeline_cmd, true);
  ChannelFlags pipe_channel;
  pipe_channel.add(pipeline_cmd);
  std::string pipe_thresholds;
  std::string pipe_l_grid;
  pipeline_cmd->add_option("--families", families_text, "comma-separated family names");
  pipeline_cmd->add_option("--nsim", nsim);
  pipeline_cmd->add_option("--nrank", nrank);
  pipeline_cmd->add_option("--thresholds", pipe_thresholds, "coverage thresholds in dB");
  pipeline_cmd->add_option("--l-grid", pipe_l_grid, "r values for the L test");
  pipeline_cmd->add_option("--r-grid", r_grid_text);
  pipeline_cmd->add_option("--sat-grid", sat_grid_text);
  pipeline_cmd->add_option("--steps", mcmc_steps, "MCMC steps for Gibbs families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const RngSeed seed = common.resolve_seed();
    const fs::path out(common.out);
    McmcConfig mcmc;
    mcmc.n_steps = mcmc_steps;
    mcmc.validate();

    auto model_for = [&](const ModelFlags& flags, const PointPattern& pattern) -> FittedModel {
      if (!flags.model_file.empty()) return io::fitted_from_json(json_from_file(flags.model_file));
      if (flags.family.empty()) throw ConfigError("give --model or --family");
      const bool explicit_params = flags.lambda || flags.beta || flags.kappa;
      if (explicit_params) return FittedModel{flags.spec(), pattern.window(), {}};
      PipelineConfig config;
      return fit_family(pattern, parse_family(flags.family), config);
    };

    if (*simulate_cmd) {
      const ModelSpec spec = sim_model.model_file.empty()
                                 ? sim_model.spec()
                                 : io::fitted_from_json(json_from_file(sim_model.model_file)).spec;
      const PointPattern pattern = simulate(spec, parse_window(sim_window), seed, mcmc);
      io::write_file(out / "pattern.csv", io::pattern_to_csv(pattern));
      std::cout << pattern.size() << " points\n";
    } else if (*classify_cmd) {
      const PointPattern pattern = common.normalized_input();
      const InteractionVerdict verdict = classify_pattern(pattern, classify_options);
      const auto grid = classification_grid(pattern, classify_options);
      io::write_json(out / "classification.json", {{"verdict", verdict_name(verdict)},
                                                   {"interval_max", classify_options.interval_max},
                                                   {"L", io::curve_to_json(l_function(pattern, grid))}});
      std::cout << verdict_name(verdict) << "\n";
    } else if (*fit_cmd) {
      const PointPattern pattern = common.normalized_input();
      PipelineConfig config;
      if (!r_grid_text.empty()) config.profile.r = parse_grid(r_grid_text);
      if (!sat_grid_text.empty()) {
        config.profile.sat.clear();
        for (double s : parse_grid(sat_grid_text)) config.profile.sat.push_back(parse_sat(s));
      }
      for (const Family f : parse_families(families_text)) {
        const FittedModel fit = fit_family(pattern, f, config);
        io::write_json(out / ("fit_" + std::string(family_name(f)) + ".json"), io::fitted_to_json(fit));
        std::cout << family_name(f) << ": " << io::model_to_json(fit.spec).dump() << "\n";
      }
    } else if (*envelope_cmd) {
      const PointPattern pattern = common.normalized_input();
      const FittedModel model = model_for(env_model, pattern);
      StatisticSpec stat{parse_curve_kind(statistic), {}, {}, seed};
      std::vector<double> grid;
      if (stat.kind == CurveKind::Coverage) {
        stat.channel = env_channel.channel();
        stat.placement = env_channel.placement();
        grid = grid_text.empty() ? default_thresholds_db() : parse_grid(grid_text);
      } else {
        grid = grid_text.empty() ? default_l_grid() : parse_grid(grid_text);
      }
      EnvelopeOptions options;
      options.mcmc = mcmc;
      const SummaryCurve observed = evaluate_statistic(stat, pattern, grid);
      const Envelope env = build_envelope(model, stat, grid, nsim, nrank, derive_seed(seed, 1), options);
      const TestReport report = test_curve(observed, env);
      const std::string stem = std::string(family_name(family_of(model.spec))) + "_" +
                               std::string(curve_kind_name(stat.kind));
      io::write_file(out / ("envelope_" + stem + ".csv"), io::envelope_to_csv(env, observed));
      io::write_json(out / ("test_" + stem + ".json"),
                     {{"envelope", io::envelope_to_json(env)}, {"report", io::report_to_json(report)}});
      std::cout << (report.rejected ? "rejected" : "not rejected") << " at alpha=" << io::format_double(env.alpha)
                << "\n";
    } else if (*coverage_cmd) {
      const PointPattern pattern = common.normalized_input();
      const SummaryCurve curve = coverage_curve(pattern, parse_grid(thresholds_text), cov_channel.placement(),
                                                cov_channel.channel(), seed);
      io::write_file(out / "coverage.csv", io::curve_to_csv(curve));
    } else if (*survey_cmd) {
      const PointPattern pattern = common.normalized_input();
      const PointPattern raw = io::ingest(common.input, io::parse_mode(common.mode)).pattern;
      const SurveyResult result = survey_subregions(pattern, survey_options, seed);
      if (region.empty()) region = fs::path(common.input).stem().string();
      std::ostringstream csv;
      csv << "region,points,area,clustered_pct,repulsive_pct,neither_pct,subregions\n";
      csv << region << "," << raw.size() << "," << io::format_double(raw.window().area()) << ","
          << io::format_double(100.0 * result.clustered_fraction) << ","
          << io::format_double(100.0 * result.repulsive_fraction) << ","
          << io::format_double(100.0 * result.neither_fraction) << "," << result.classified << "\n";
      io::write_file(out / "survey.csv", csv.str());
      if (!result.complete) {
        std::cerr << "warning: only " << result.classified << " subregions met the count range\n";
      }
    } else if (*pipeline_cmd) {
      PipelineConfig config;
      config.input = common.input;
      config.mode = io::parse_mode(common.mode);
      config.families = parse_families(families_text);
      config.nsim = nsim;
      config.nrank = nrank;
      config.seed = seed;
      config.out_dir = out;
      config.mcmc = mcmc;
      config.channel = pipe_channel.channel();
      config.placement = pipe_channel.placement();
      if (!pipe_thresholds.empty()) config.thresholds_db = parse_grid(pipe_thresholds);
      if (!pipe_l_grid.empty()) config.l_grid = parse_grid(pipe_l_grid);
      if (!r_grid_text.empty()) config.profile.r = parse_grid(r_grid_text);
      if (!sat_grid_text.empty()) {
        config.profile.sat.clear();
        for (double s : parse_grid(sat_grid_text)) config.profile.sat.push_back(parse_sat(s));
      }
      const PipelineResult result = run_pipeline(config);
      std::cout << "verdict: " << verdict_name(result.verdict) << "\n";
      for (const auto& [family, outcome] : result.outcomes) {
        std::cout << family_name(family) << ": " << (outcome.rejected() ? "rejected" : "not rejected") << "\n";
      }
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
