#include "cellgeo/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cellgeo/error.hpp"

namespace cellgeo {

namespace {

// Stage seeds: derive_seed(master, k) with k fixed per use.
constexpr std::uint64_t kCoverageUsersStream = 2;
constexpr std::uint64_t kEnvelopeStreamBase = 100;

class StageRunner {
 public:
  StageRunner(const PipelineConfig& config, PipelineResult& result)
      : config_(config), result_(result) {}

  template <class F>
  void run(const std::string& stage, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      write_manifest(stage, e.what());
      rethrow_prefixed(e, "[" + stage + "] ");
    } catch (const std::exception& e) {
      write_manifest(stage, e.what());
      throw NumericalError("[" + stage + "] " + e.what());
    }
    result_.completed_stages.push_back(stage);
  }

  void write_manifest(const std::string& failed_stage = {}, const std::string& error = {}) const {
    if (config_.out_dir.empty()) return;
    io::json manifest{{"completed_stages", result_.completed_stages}};
    if (!failed_stage.empty()) {
      manifest["failed_stage"] = failed_stage;
      manifest["error"] = error;
    }
    io::write_json(config_.out_dir / "manifest.json", manifest);
  }

 private:
  const PipelineConfig& config_;
  PipelineResult& result_;
};

double hard_core_rule(const PointPattern& pattern) {
  const double n = static_cast<double>(pattern.size());
  return min_pair_distance(pattern.points()) * n / (n + 1.0);
}

}  // namespace

std::vector<double> default_l_grid() { return linear_grid(0.005, 0.25, 50); }

std::vector<double> default_thresholds_db() { return linear_grid(-10.0, 20.0, 16); }

FittedModel fit_family(const PointPattern& pattern, Family family, const PipelineConfig& config) {
  if (family == Family::Poisson) return fit_poisson(pattern);
  if (family == Family::MaternCluster) return fit_matern_cluster(pattern);
  ProfileGrid grid = config.profile;
  if ((family == Family::StraussHardCore || family == Family::PoissonHardCore) && grid.hc.empty()) {
    if (pattern.size() < 2) throw DataError("hard-core fit needs at least two points");
    grid.hc = {hard_core_rule(pattern)};
  }
  if (family == Family::StraussHardCore) {
    const double hc_min = *std::min_element(grid.hc.begin(), grid.hc.end());
    std::erase_if(grid.r, [&](double r) { return r <= hc_min; });
  }
  const QuadratureScheme quad = make_quadrature(pattern, config.dummy_per_side);
  return fit_profile(pattern, family, grid, quad);
}

PipelineResult run_pipeline(const PointPattern& data, const PipelineConfig& config,
                            const std::vector<std::string>& ids) {
  if (config.families.empty()) throw ConfigError("no model families requested");
  config.channel.validate();
  config.placement.validate();
  config.mcmc.validate();
  if (config.nrank < 1 || config.nsim < 2 * config.nrank) {
    throw ConfigError("envelope needs nrank >= 1 and nsim >= 2 * nrank");
  }
  const auto l_grid = config.l_grid.empty() ? default_l_grid() : config.l_grid;
  const auto thresholds = config.thresholds_db.empty() ? default_thresholds_db() : config.thresholds_db;
  const bool write = !config.out_dir.empty();
  const auto& out = config.out_dir;

  PipelineResult result;
  StageRunner stages(config, result);

  stages.run("normalize", [&] {
    result.pattern = rescale_to_unit(data);
    if (write) io::write_file(out / "pattern.csv", io::pattern_to_csv(result.pattern, ids));
  });
  const PointPattern& pattern = result.pattern;

  stages.run("classify", [&] {
    result.verdict = classify_pattern(pattern, config.classify);
    if (write) {
      const auto grid = classification_grid(pattern, config.classify);
      io::write_json(out / "classification.json",
                     {{"verdict", verdict_name(result.verdict)},
                      {"interval_max", config.classify.interval_max},
                      {"L", io::curve_to_json(l_function(pattern, grid))}});
    }
  });

  StatisticSpec l_stat{CurveKind::L, {}, {}, {}};
  StatisticSpec coverage_stat{CurveKind::Coverage, config.channel, config.placement,
                              derive_seed(config.seed, kCoverageUsersStream)};
  SummaryCurve observed_l;
  SummaryCurve observed_coverage;
  stages.run("observe", [&] {
    observed_l = evaluate_statistic(l_stat, pattern, l_grid);
    observed_coverage = evaluate_statistic(coverage_stat, pattern, thresholds);
    if (write) {
      io::write_file(out / "observed_L.csv", io::curve_to_csv(observed_l));
      io::write_file(out / "observed_coverage.csv", io::curve_to_csv(observed_coverage));
    }
  });

  EnvelopeOptions envelope_options;
  envelope_options.mcmc = config.mcmc;
  for (const Family family : config.families) {
    const std::string name(family_name(family));
    FamilyOutcome outcome{FittedModel{family::Poisson{0.0}, pattern.window(), {}}, {}, {}};
    stages.run("fit:" + name, [&] {
      outcome.fit = fit_family(pattern, family, config);
      if (write) io::write_json(out / ("fit_" + name + ".json"), io::fitted_to_json(outcome.fit));
    });
    stages.run("envelope:" + name, [&] {
      const std::array<EnvelopeRequest, 2> requests{EnvelopeRequest{l_stat, l_grid},
                                                    EnvelopeRequest{coverage_stat, thresholds}};
      const RngSeed family_seed =
          derive_seed(config.seed, kEnvelopeStreamBase + static_cast<std::uint64_t>(family));
      const auto envelopes = build_envelopes(outcome.fit, requests, config.nsim, config.nrank, family_seed,
                                             envelope_options);
      outcome.l_test = test_curve(observed_l, envelopes[0]);
      outcome.coverage_test = test_curve(observed_coverage, envelopes[1]);
      if (!write) return;
      const std::array<const SummaryCurve*, 2> observed{&observed_l, &observed_coverage};
      const std::array<const TestReport*, 2> reports{&outcome.l_test, &outcome.coverage_test};
      for (std::size_t k = 0; k < 2; ++k) {
        const std::string stem = name + "_" + std::string(curve_kind_name(envelopes[k].kind));
        io::write_file(out / ("envelope_" + stem + ".csv"), io::envelope_to_csv(envelopes[k], *observed[k]));
        io::write_json(out / ("test_" + stem + ".json"),
                       {{"envelope", io::envelope_to_json(envelopes[k])}, {"report", io::report_to_json(*reports[k])}});
      }
    });
    if (!outcome.rejected()) result.not_rejected.push_back(family);
    result.outcomes.emplace_back(family, std::move(outcome));
  }

  stages.run("summary", [&] {
    if (!write) return;
    io::json families = io::json::object();
    for (const auto& [family, outcome] : result.outcomes) {
      families[std::string(family_name(family))] = {{"rejected_by_L", outcome.l_test.rejected},
                                                    {"rejected_by_coverage", outcome.coverage_test.rejected},
                                                    {"rejected", outcome.rejected()}};
    }
    io::json kept = io::json::array();
    for (const Family f : result.not_rejected) kept.push_back(family_name(f));
    std::string remark;
    if (result.not_rejected.empty()) {
      remark = "every candidate model is rejected";
    } else {
      remark = "not rejected by either statistic:";
      for (const Family f : result.not_rejected) remark += " " + std::string(family_name(f));
    }
    io::write_json(out / "summary.json", {{"points", pattern.size()},
                                          {"verdict", verdict_name(result.verdict)},
                                          {"alpha", envelope_alpha(config.nsim, config.nrank)},
                                          {"families", families},
                                          {"not_rejected", kept},
                                          {"remark", remark}});
  });
  stages.write_manifest();
  return result;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  io::IngestResult ingested;
  try {
    ingested = io::ingest(config.input, config.mode);
  } catch (const Error& e) {
    rethrow_prefixed(e, "[ingest] ");
  }
  return run_pipeline(ingested.pattern, config, ingested.ids);
}

}  // namespace cellgeo
