#include "cellgeo/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cellgeo/error.hpp"

namespace cellgeo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// gamma^count with 0^0 = 1.
double interaction_power(double gamma, std::uint64_t count) {
  return count == 0 ? 1.0 : std::pow(gamma, static_cast<double>(count));
}

// count * log(gamma) with 0 * log(0) = 0.
double interaction_log(double gamma, double count) {
  return count == 0.0 ? 0.0 : count * std::log(gamma);
}

double count_log(double beta, std::size_t n) {
  return n == 0 ? 0.0 : static_cast<double>(n) * std::log(beta);
}

std::uint64_t neighbours_within(std::span<const Point> points, Point u, double r) {
  const double r2 = r * r;
  std::uint64_t t = 0;
  for (const Point& p : points) {
    if (squared_distance(p, u) <= r2) ++t;
  }
  return t;
}

bool violates_hard_core(std::span<const Point> points, Point u, double hc) {
  const double hc2 = hc * hc;
  for (const Point& p : points) {
    if (squared_distance(p, u) < hc2) return true;
  }
  return false;
}

// Change in the Geyer saturation statistic when u joins `others`.
std::uint64_t geyer_increment(std::span<const Point> others, Point u, double r,
                              std::uint32_t sat) {
  const double r2 = r * r;
  std::uint64_t t_u = 0;
  std::uint64_t back_reaction = 0;
  for (std::size_t j = 0; j < others.size(); ++j) {
    if (squared_distance(others[j], u) > r2) continue;
    ++t_u;
    // Neighbour j gains u; it contributes only while below saturation.
    std::uint64_t t_j = 0;
    for (std::size_t k = 0; k < others.size() && t_j < sat; ++k) {
      if (k != j && squared_distance(others[j], others[k]) <= r2) ++t_j;
    }
    if (t_j < sat) ++back_reaction;
  }
  return std::min<std::uint64_t>(sat, t_u) + back_reaction;
}

void require(bool ok, const char* family, const char* what) {
  if (!ok) throw ConfigError(std::string(family) + ": " + what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Family family_of(const ModelSpec& spec) noexcept {
  return static_cast<Family>(spec.index());
}

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::Poisson: return "poisson";
    case Family::Strauss: return "strauss";
    case Family::StraussHardCore: return "strauss_hard_core";
    case Family::PoissonHardCore: return "poisson_hard_core";
    case Family::GeyerSaturation: return "geyer";
    case Family::MaternCluster: return "matern_cluster";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "poisson" || name == "ppp") return Family::Poisson;
  if (name == "strauss") return Family::Strauss;
  if (name == "strauss_hard_core" || name == "sh") return Family::StraussHardCore;
  if (name == "poisson_hard_core" || name == "phcp") return Family::PoissonHardCore;
  if (name == "geyer") return Family::GeyerSaturation;
  if (name == "matern_cluster" || name == "mcp") return Family::MaternCluster;
  throw ConfigError("unknown model family '" + std::string(name) + "'");
}

bool is_gibbs(Family f) noexcept {
  return f == Family::Strauss || f == Family::StraussHardCore ||
         f == Family::PoissonHardCore || f == Family::GeyerSaturation;
}

void validate(const ModelSpec& spec) {
  std::visit(
      Overloaded{
          [](const family::Poisson& m) {
            require(finite_nonneg(m.lambda), "poisson", "lambda must be finite and >= 0");
          },
          [](const family::Strauss& m) {
            require(finite_nonneg(m.beta), "strauss", "beta must be finite and >= 0");
            require(m.gamma >= 0.0 && m.gamma <= 1.0, "strauss",
                    "gamma must lie in [0, 1]; the process is not integrable for gamma > 1");
            require(finite_pos(m.r), "strauss", "r must be positive");
          },
          [](const family::StraussHardCore& m) {
            require(finite_nonneg(m.beta), "strauss_hard_core", "beta must be finite and >= 0");
            require(m.gamma >= 0.0 && m.gamma <= 1.0, "strauss_hard_core",
                    "gamma must lie in [0, 1]");
            require(finite_pos(m.r), "strauss_hard_core", "r must be positive");
            require(finite_pos(m.hc) && m.hc < m.r, "strauss_hard_core",
                    "hard-core distance must satisfy 0 < hc < r");
          },
          [](const family::PoissonHardCore& m) {
            require(finite_nonneg(m.beta), "poisson_hard_core", "beta must be finite and >= 0");
            require(finite_pos(m.hc), "poisson_hard_core", "hard-core distance must be positive");
          },
          [](const family::GeyerSaturation& m) {
            require(finite_nonneg(m.beta), "geyer", "beta must be finite and >= 0");
            require(finite_pos(m.gamma), "geyer", "gamma must be positive");
            require(finite_pos(m.r), "geyer", "r must be positive");
            require(m.sat >= 1, "geyer", "saturation must be at least 1");
          },
          [](const family::MaternCluster& m) {
            require(finite_nonneg(m.kappa), "matern_cluster", "kappa must be finite and >= 0");
            require(finite_nonneg(m.mu), "matern_cluster", "mu must be finite and >= 0");
            require(finite_pos(m.r), "matern_cluster", "cluster radius must be positive");
          },
      },
      spec);
}

double papangelou(const ModelSpec& spec, std::span<const Point> others, Point u) {
  return std::visit(
      Overloaded{
          [](const family::Poisson& m) { return m.lambda; },
          [&](const family::Strauss& m) {
            return m.beta * interaction_power(m.gamma, neighbours_within(others, u, m.r));
          },
          [&](const family::StraussHardCore& m) {
            if (violates_hard_core(others, u, m.hc)) return 0.0;
            return m.beta * interaction_power(m.gamma, neighbours_within(others, u, m.r));
          },
          [&](const family::PoissonHardCore& m) {
            return violates_hard_core(others, u, m.hc) ? 0.0 : m.beta;
          },
          [&](const family::GeyerSaturation& m) {
            return m.beta * interaction_power(m.gamma, geyer_increment(others, u, m.r, m.sat));
          },
          [](const family::MaternCluster&) -> double {
            throw UnsupportedFamily(
                "matern_cluster has no Gibbs conditional intensity; use the cluster sampler");
          },
      },
      spec);
}

double papangelou(const ModelSpec& spec, const PointPattern& pattern, Point u) {
  return papangelou(spec, pattern.points(), u);
}

double log_density_unnormalized(const ModelSpec& spec, std::span<const Point> points) {
  const std::size_t n = points.size();
  return std::visit(
      Overloaded{
          [&](const family::Poisson& m) { return count_log(m.lambda, n); },
          [&](const family::Strauss& m) {
            const auto s = static_cast<double>(close_pair_count(points, m.r));
            return count_log(m.beta, n) + interaction_log(m.gamma, s);
          },
          [&](const family::StraussHardCore& m) {
            if (min_pair_distance(points) < m.hc) return kNegInf;
            const auto s = static_cast<double>(close_pair_count(points, m.r));
            return count_log(m.beta, n) + interaction_log(m.gamma, s);
          },
          [&](const family::PoissonHardCore& m) {
            if (min_pair_distance(points) < m.hc) return kNegInf;
            return count_log(m.beta, n);
          },
          [&](const family::GeyerSaturation& m) {
            const double r2 = m.r * m.r;
            double saturated = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
              std::uint64_t t = 0;
              for (std::size_t j = 0; j < n; ++j) {
                if (j != i && squared_distance(points[i], points[j]) <= r2) ++t;
              }
              saturated += static_cast<double>(std::min<std::uint64_t>(m.sat, t));
            }
            return count_log(m.beta, n) + interaction_log(m.gamma, saturated);
          },
          [](const family::MaternCluster&) -> double {
            throw UnsupportedFamily("matern_cluster has no closed-form Gibbs density");
          },
      },
      spec);
}

double log_density_unnormalized(const ModelSpec& spec, const PointPattern& pattern) {
  return log_density_unnormalized(spec, pattern.points());
}

}  // namespace cellgeo
