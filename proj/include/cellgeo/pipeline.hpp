#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cellgeo/fit.hpp"
#include "cellgeo/gof.hpp"
#include "cellgeo/io.hpp"
#include "cellgeo/radio.hpp"
#include "cellgeo/sim.hpp"
#include "cellgeo/stats.hpp"

namespace cellgeo {

struct PipelineConfig {
  std::filesystem::path input;
  io::CoordinateMode mode = io::CoordinateMode::Planar;
  std::vector<Family> families{Family::Poisson, Family::GeyerSaturation, Family::MaternCluster};
  // Envelope grids; empty picks the defaults (r in 0.005..0.25 step 0.005,
  // thresholds -10..20 dB step 2).
  std::vector<double> l_grid;
  std::vector<double> thresholds_db;
  std::size_t nsim = 99;
  std::size_t nrank = 5;
  ChannelConfig channel;
  UserPlacement placement;
  RngSeed seed{1};
  // Empty: run in memory without writing files.
  std::filesystem::path out_dir;
  McmcConfig mcmc;
  ClassifyOptions classify;
  // Irregular-parameter grids; an empty hc grid uses the nearest-neighbour
  // rule hc = min_nn * N / (N + 1).
  ProfileGrid profile{linear_grid(0.01, 0.1, 19), {}, {1, 2, 3, 4, 5}};
  std::size_t dummy_per_side = 0;
};

std::vector<double> default_l_grid();
std::vector<double> default_thresholds_db();

struct FamilyOutcome {
  FittedModel fit;
  TestReport l_test;
  TestReport coverage_test;
  bool rejected() const { return l_test.rejected || coverage_test.rejected; }
};

struct PipelineResult {
  PointPattern pattern{Window::unit()};
  InteractionVerdict verdict = InteractionVerdict::Neither;
  std::vector<std::pair<Family, FamilyOutcome>> outcomes;
  std::vector<Family> not_rejected;
  std::vector<std::string> completed_stages;
};

// Ingests config.input, maps it onto the unit square and runs
// classify -> fit -> envelope tests for every family.
PipelineResult run_pipeline(const PipelineConfig& config);

// Same stages starting from an in-memory pattern (already normalised or not).
PipelineResult run_pipeline(const PointPattern& data, const PipelineConfig& config,
                            const std::vector<std::string>& ids = {});

// Fits one family with the pipeline's default irregular-parameter handling.
FittedModel fit_family(const PointPattern& pattern, Family family, const PipelineConfig& config);

}  // namespace cellgeo
