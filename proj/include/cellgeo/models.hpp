#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cellgeo/core.hpp"

namespace cellgeo {

// Point-process families. Parameter names follow the usual notation:
// beta is the first-order term, gamma the pairwise interaction, r the
// interaction (or cluster) radius, hc the hard-core distance.
namespace family {

struct Poisson {
  double lambda = 0.0;
};

// Density proportional to beta^N gamma^s(x); gamma in [0, 1].
struct Strauss {
  double beta = 0.0;
  double gamma = 1.0;
  double r = 0.0;
};

struct StraussHardCore {
  double beta = 0.0;
  double gamma = 1.0;
  double r = 0.0;
  double hc = 0.0;
};

struct PoissonHardCore {
  double beta = 0.0;
  double hc = 0.0;
};

// Density proportional to beta^N gamma^S(x) with
// S(x) = sum_i min(sat, t(x_i, x \ x_i)), t counting r-close neighbours.
struct GeyerSaturation {
  double beta = 0.0;
  double gamma = 1.0;
  double r = 0.0;
  std::uint32_t sat = 1;
};

struct MaternCluster {
  double kappa = 0.0;
  double r = 0.0;
  double mu = 0.0;
};

}  // namespace family

using ModelSpec = std::variant<family::Poisson, family::Strauss, family::StraussHardCore,
                               family::PoissonHardCore, family::GeyerSaturation,
                               family::MaternCluster>;

enum class Family { Poisson, Strauss, StraussHardCore, PoissonHardCore, GeyerSaturation, MaternCluster };

Family family_of(const ModelSpec& spec) noexcept;
// Canonical identifiers: poisson, strauss, strauss_hard_core, poisson_hard_core,
// geyer, matern_cluster. Parsing also accepts the short forms ppp, sh, phcp, mcp.
std::string_view family_name(Family f) noexcept;
Family parse_family(std::string_view name);
bool is_gibbs(Family f) noexcept;

// Throws ConfigError describing the first violated parameter constraint.
void validate(const ModelSpec& spec);

// Papangelou conditional intensity lambda(u | x) for Poisson and Gibbs
// families. `others` must not contain u. MaternCluster throws UnsupportedFamily.
double papangelou(const ModelSpec& spec, std::span<const Point> others, Point u);
double papangelou(const ModelSpec& spec, const PointPattern& pattern, Point u);

// log f(x) without the normalizing constant; -inf on a hard-core violation.
double log_density_unnormalized(const ModelSpec& spec, std::span<const Point> points);
double log_density_unnormalized(const ModelSpec& spec, const PointPattern& pattern);

struct FitDiagnostics {
  // Log pseudolikelihood at the estimate (Gibbs / Poisson fits).
  std::optional<double> log_pseudolikelihood;
  // Minimum-contrast objective at the estimate (cluster fits).
  std::optional<double> contrast;
  // Irregular-parameter grids that were searched, by parameter name.
  std::map<std::string, std::vector<double>> searched_grids;
  // Estimates before projection onto the valid parameter space, if different.
  std::map<std::string, double> unconstrained;
  std::size_t data_points = 0;
  bool degenerate = false;
  std::vector<std::string> notes;
};

struct FittedModel {
  ModelSpec spec;
  Window fit_window;
  FitDiagnostics diagnostics;
};

}  // namespace cellgeo
