#include "cellgeo/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cellgeo/random.hpp"

namespace cellgeo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-quadrature-point sufficient statistic of a Gibbs family: the exponent
// of gamma in lambda(u | x) and whether u is allowed by the hard core.
struct Covariates {
  std::vector<double> t;
  std::vector<char> feasible;
  bool has_gamma = true;
};

std::vector<std::uint32_t> data_neighbour_counts(std::span<const Point> data, double r) {
  const double r2 = r * r;
  std::vector<std::uint32_t> counts(data.size(), 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = i + 1; j < data.size(); ++j) {
      if (squared_distance(data[i], data[j]) <= r2) {
        ++counts[i];
        ++counts[j];
      }
    }
  }
  return counts;
}

double required(const std::optional<double>& v, const char* name, Family f) {
  if (!v) {
    throw ConfigError(std::string(family_name(f)) + " fit needs the irregular parameter " + name);
  }
  return *v;
}

Covariates covariates(Family family, const IrregularParameters& fixed, const QuadratureScheme& quad) {
  const std::span<const Point> data(quad.points.data(), quad.n_data);
  const std::size_t m = quad.points.size();
  Covariates cov{std::vector<double>(m, 0.0), std::vector<char>(m, 1), true};

  const bool strauss_like = family == Family::Strauss || family == Family::StraussHardCore;
  const bool hard_core = family == Family::StraussHardCore || family == Family::PoissonHardCore;
  cov.has_gamma = strauss_like || family == Family::GeyerSaturation;

  if (hard_core) {
    const double hc = required(fixed.hc, "hc", family);
    const double hc2 = hc * hc;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < quad.n_data; ++i) {
        if (i != j && squared_distance(quad.points[j], data[i]) < hc2) {
          cov.feasible[j] = 0;
          break;
        }
      }
    }
  }
  if (strauss_like) {
    const double r = required(fixed.r, "r", family);
    const double r2 = r * r;
    for (std::size_t j = 0; j < m; ++j) {
      std::uint32_t t = 0;
      for (std::size_t i = 0; i < quad.n_data; ++i) {
        if (i != j && squared_distance(quad.points[j], data[i]) <= r2) ++t;
      }
      cov.t[j] = t;
    }
  }
  if (family == Family::GeyerSaturation) {
    const double r = required(fixed.r, "r", family);
    if (!fixed.sat) throw ConfigError("geyer fit needs the irregular parameter sat");
    const std::uint32_t sat = *fixed.sat;
    const double r2 = r * r;
    const auto counts = data_neighbour_counts(data, r);
    for (std::size_t j = 0; j < m; ++j) {
      const bool is_data = j < quad.n_data;
      std::uint32_t t_u = 0;
      std::uint32_t back = 0;
      for (std::size_t i = 0; i < quad.n_data; ++i) {
        if (i == j || squared_distance(quad.points[j], data[i]) > r2) continue;
        ++t_u;
        // Neighbour i's count without the point u itself.
        const std::uint32_t t_i = is_data ? counts[i] - 1 : counts[i];
        if (t_i < sat) ++back;
      }
      cov.t[j] = std::min(sat, t_u) + back;
    }
  }
  return cov;
}

struct Objective {
  const Covariates& cov;
  const QuadratureScheme& quad;
  bool gamma_free;

  // theta = (log beta, log gamma); log gamma ignored unless gamma_free.
  double value(const std::array<double, 2>& theta) const {
    double v = 0.0;
    for (std::size_t j = 0; j < quad.points.size(); ++j) {
      if (!cov.feasible[j]) continue;
      const double eta = theta[0] + (gamma_free ? theta[1] * cov.t[j] : 0.0);
      if (j < quad.n_data) v += eta;
      v -= quad.weights[j] * std::exp(eta);
    }
    return v;
  }

  void derivatives(const std::array<double, 2>& theta, std::array<double, 2>& grad,
                   std::array<double, 3>& hess) const {
    grad = {0.0, 0.0};
    hess = {0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < quad.points.size(); ++j) {
      if (!cov.feasible[j]) continue;
      const double z = gamma_free ? cov.t[j] : 0.0;
      const double mu = quad.weights[j] * std::exp(theta[0] + theta[1] * z);
      if (j < quad.n_data) {
        grad[0] += 1.0;
        grad[1] += z;
      }
      grad[0] -= mu;
      grad[1] -= mu * z;
      hess[0] -= mu;
      hess[1] -= mu * z;
      hess[2] -= mu * z * z;
    }
  }
};

struct NewtonResult {
  std::array<double, 2> theta;
  double value;
};

NewtonResult newton(const Objective& obj, std::array<double, 2> theta, const MplOptions& options,
                    Family family) {
  double current = obj.value(theta);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    std::array<double, 2> g;
    std::array<double, 3> h;
    obj.derivatives(theta, g, h);
    if (!obj.gamma_free) g[1] = 0.0;
    if (std::max(std::fabs(g[0]), std::fabs(g[1])) < options.gradient_tolerance) {
      return {theta, current};
    }
    std::array<double, 2> step;
    if (obj.gamma_free) {
      const double det = h[0] * h[2] - h[1] * h[1];
      step = {-(h[2] * g[0] - h[1] * g[1]) / det, -(h[0] * g[1] - h[1] * g[0]) / det};
    } else {
      step = {-g[0] / h[0], 0.0};
    }
    // Newton decrement: the predicted gain of the full step. Below the
    // resolution of the summed objective no line search can make progress.
    const double decrement = g[0] * step[0] + g[1] * step[1];
    if (std::isfinite(decrement) && decrement < 1e-13 * (1.0 + std::fabs(current))) {
      const std::array<double, 2> last{theta[0] + step[0], theta[1] + step[1]};
      const double v = obj.value(last);
      if (std::isfinite(v) && v >= current) return {last, v};
      return {theta, current};
    }
    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving, scale *= 0.5) {
      const std::array<double, 2> trial{theta[0] + scale * step[0], theta[1] + scale * step[1]};
      const double v = obj.value(trial);
      if (std::isfinite(v) && v > current) {
        improved = true;
        theta = trial;
        current = v;
        break;
      }
    }
    if (!improved) return {theta, current};  // at the optimum to machine precision
  }
  throw NonConvergence(
      "pseudolikelihood Newton iterations did not converge within " +
          std::to_string(options.max_iterations) + " iterations",
      family == Family::PoissonHardCore
          ? ModelSpec{family::PoissonHardCore{std::exp(theta[0]), 0.0}}
          : ModelSpec{family::Strauss{std::exp(theta[0]), std::exp(theta[1]), 0.0}});
}

ModelSpec make_spec(Family family, const IrregularParameters& fixed, double beta, double gamma) {
  switch (family) {
    case Family::Poisson: return family::Poisson{beta};
    case Family::Strauss: return family::Strauss{beta, gamma, *fixed.r};
    case Family::StraussHardCore: return family::StraussHardCore{beta, gamma, *fixed.r, *fixed.hc};
    case Family::PoissonHardCore: return family::PoissonHardCore{beta, *fixed.hc};
    case Family::GeyerSaturation: return family::GeyerSaturation{beta, gamma, *fixed.r, *fixed.sat};
    case Family::MaternCluster: break;
  }
  throw UnsupportedFamily("pseudolikelihood fitting does not apply to matern_cluster");
}

IrregularParameters irregulars_of(const ModelSpec& spec) {
  IrregularParameters p;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (requires { m.r; }) {
          if constexpr (!std::is_same_v<M, family::MaternCluster>) p.r = m.r;
        }
        if constexpr (requires { m.hc; }) p.hc = m.hc;
        if constexpr (requires { m.sat; }) p.sat = m.sat;
      },
      spec);
  return p;
}

// h(z): CDF at 2rz of the distance between two uniform points in a disc of radius r.
double disc_distance_cdf(double z) {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 1.0;
  const double s = std::sqrt(1.0 - z * z);
  return 2.0 + ((8.0 * z * z - 4.0) * std::acos(z) - 2.0 * std::asin(z) +
                4.0 * z * s * s * s - 6.0 * z * s) /
                   std::numbers::pi;
}

}  // namespace

QuadratureScheme make_quadrature(const PointPattern& data, std::size_t dummy_per_side) {
  if (dummy_per_side == 0) {
    dummy_per_side =
        4 * static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(data.size(), 1)))));
  }
  const Window& w = data.window();
  const std::size_t nd = dummy_per_side;
  const double tx = w.width() / static_cast<double>(nd);
  const double ty = w.height() / static_cast<double>(nd);
  auto tile_of = [&](Point p) {
    const auto ix = std::min(nd - 1, static_cast<std::size_t>((p.x - w.x_min()) / tx));
    const auto iy = std::min(nd - 1, static_cast<std::size_t>((p.y - w.y_min()) / ty));
    return iy * nd + ix;
  };

  QuadratureScheme quad;
  quad.window = w;
  quad.n_data = data.size();
  quad.points.assign(data.points().begin(), data.points().end());
  for (std::size_t iy = 0; iy < nd; ++iy) {
    for (std::size_t ix = 0; ix < nd; ++ix) {
      quad.points.push_back({w.x_min() + (static_cast<double>(ix) + 0.5) * tx,
                             w.y_min() + (static_cast<double>(iy) + 0.5) * ty});
    }
  }
  std::vector<std::size_t> occupancy(nd * nd, 0);
  std::vector<std::size_t> tile(quad.points.size());
  for (std::size_t j = 0; j < quad.points.size(); ++j) {
    tile[j] = tile_of(quad.points[j]);
    ++occupancy[tile[j]];
  }
  const double tile_area = tx * ty;
  quad.weights.resize(quad.points.size());
  for (std::size_t j = 0; j < quad.points.size(); ++j) {
    quad.weights[j] = tile_area / static_cast<double>(occupancy[tile[j]]);
  }
  return quad;
}

FittedModel fit_poisson(const PointPattern& pattern) {
  FittedModel fit{family::Poisson{pattern.intensity()}, pattern.window(), {}};
  fit.diagnostics.data_points = pattern.size();
  if (pattern.empty()) {
    fit.diagnostics.degenerate = true;
    fit.diagnostics.notes.push_back("empty pattern: intensity estimate is 0");
  }
  return fit;
}

double log_pseudolikelihood(const ModelSpec& spec, const QuadratureScheme& quad) {
  validate(spec);
  const Family family = family_of(spec);
  if (family == Family::MaternCluster) {
    throw UnsupportedFamily("matern_cluster has no pseudolikelihood");
  }
  const auto cov = covariates(family, irregulars_of(spec), quad);
  double beta = 0.0;
  double gamma = 1.0;
  std::visit(
      [&](const auto& m) {
        if constexpr (requires { m.beta; }) beta = m.beta;
        if constexpr (requires { m.lambda; }) beta = m.lambda;
        if constexpr (requires { m.gamma; }) gamma = m.gamma;
      },
      spec);
  double v = 0.0;
  for (std::size_t j = 0; j < quad.points.size(); ++j) {
    const double lambda =
        cov.feasible[j] ? beta * (cov.t[j] == 0.0 ? 1.0 : std::pow(gamma, cov.t[j])) : 0.0;
    if (j < quad.n_data) v += lambda > 0.0 ? std::log(lambda) : kNegInf;
    v -= quad.weights[j] * lambda;
  }
  return v;
}

FittedModel fit_mpl(const PointPattern& pattern, Family family, const IrregularParameters& fixed,
                    const QuadratureScheme& quad, const MplOptions& options) {
  if (family == Family::MaternCluster) {
    throw UnsupportedFamily("fit_mpl handles Poisson and Gibbs families; use fit_matern_cluster");
  }
  if (quad.n_data != pattern.size()) {
    throw ConfigError("quadrature scheme was built for a different pattern");
  }
  const auto cov = covariates(family, fixed, quad);
  for (std::size_t i = 0; i < quad.n_data; ++i) {
    if (!cov.feasible[i]) {
      std::ostringstream msg;
      msg << family_name(family) << ": data point " << i << " lies closer than hc = " << *fixed.hc
          << " to another data point";
      throw InfeasibleFit(msg.str());
    }
  }

  FittedModel fit{family::Poisson{0.0}, pattern.window(), {}};
  fit.diagnostics.data_points = pattern.size();
  const double n = static_cast<double>(pattern.size());
  if (pattern.empty()) {
    fit.spec = make_spec(family, fixed, 0.0, 1.0);
    fit.diagnostics.degenerate = true;
    fit.diagnostics.notes.push_back("empty pattern: beta estimate is 0");
    fit.diagnostics.log_pseudolikelihood = 0.0;
    return fit;
  }

  double data_t = 0.0;
  bool any_t = false;
  double feasible_weight = 0.0;
  double untouched_weight = 0.0;  // feasible weight with t = 0
  for (std::size_t j = 0; j < quad.points.size(); ++j) {
    if (!cov.feasible[j]) continue;
    feasible_weight += quad.weights[j];
    if (cov.t[j] > 0.0) {
      any_t = true;
    } else {
      untouched_weight += quad.weights[j];
    }
    if (j < quad.n_data) data_t += cov.t[j];
  }

  double beta = n / feasible_weight;
  double gamma = 1.0;
  if (cov.has_gamma && !any_t) {
    fit.diagnostics.notes.push_back("no quadrature point has r-close neighbours: gamma set to 1");
  } else if (cov.has_gamma && data_t == 0.0) {
    // The pseudolikelihood keeps increasing as gamma -> 0.
    beta = n / untouched_weight;
    gamma = family == Family::GeyerSaturation ? std::numeric_limits<double>::min() : 0.0;
    fit.diagnostics.degenerate = true;
    fit.diagnostics.notes.push_back("no data point has r-close neighbours: gamma at its lower boundary");
  } else if (cov.has_gamma) {
    const Objective obj{cov, quad, true};
    const auto free_fit = newton(obj, {std::log(beta), 0.0}, options, family);
    beta = std::exp(free_fit.theta[0]);
    gamma = std::exp(free_fit.theta[1]);
    const bool strauss_like = family == Family::Strauss || family == Family::StraussHardCore;
    if (strauss_like && gamma > 1.0) {
      fit.diagnostics.unconstrained["beta"] = beta;
      fit.diagnostics.unconstrained["gamma"] = gamma;
      const Objective fixed_gamma{cov, quad, false};
      beta = std::exp(newton(fixed_gamma, {std::log(n / feasible_weight), 0.0}, options, family).theta[0]);
      gamma = 1.0;
      fit.diagnostics.notes.push_back("unconstrained gamma exceeds 1: projected onto gamma = 1");
    }
  } else {
    const Objective obj{cov, quad, false};
    beta = std::exp(newton(obj, {std::log(beta), 0.0}, options, family).theta[0]);
  }

  fit.spec = make_spec(family, fixed, beta, gamma);
  fit.diagnostics.log_pseudolikelihood = log_pseudolikelihood(fit.spec, quad);
  return fit;
}

FittedModel fit_profile(const PointPattern& pattern, Family family, const ProfileGrid& grid,
                        const QuadratureScheme& quad, const MplOptions& options) {
  const bool uses_r = family == Family::Strauss || family == Family::StraussHardCore ||
                      family == Family::GeyerSaturation;
  const bool uses_hc = family == Family::StraussHardCore || family == Family::PoissonHardCore;
  const bool uses_sat = family == Family::GeyerSaturation;
  auto check = [](bool used, bool empty, const char* name) {
    if (used && empty) throw ConfigError(std::string("profile grid for ") + name + " is empty");
  };
  check(uses_r, grid.r.empty(), "r");
  check(uses_hc, grid.hc.empty(), "hc");
  check(uses_sat, grid.sat.empty(), "sat");

  auto sorted = [](auto values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
  };
  const auto rs = uses_r ? sorted(grid.r) : std::vector<double>{0.0};
  const auto sats = uses_sat ? sorted(grid.sat) : std::vector<std::uint32_t>{0};
  const auto hcs = uses_hc ? sorted(grid.hc) : std::vector<double>{0.0};

  // Enumeration order r, sat, hc ascending: the first maximum wins ties.
  std::vector<IrregularParameters> combos;
  for (const double r : rs) {
    for (const auto sat : sats) {
      for (const double hc : hcs) {
        IrregularParameters p;
        if (uses_r) p.r = r;
        if (uses_sat) p.sat = sat;
        if (uses_hc) p.hc = hc;
        combos.push_back(p);
      }
    }
  }

  std::vector<std::optional<FittedModel>> fits(combos.size());
  std::vector<std::string> failures(combos.size());
  parallel_for(combos.size(), [&](std::size_t c) {
    try {
      const auto& p = combos[c];
      if (family == Family::StraussHardCore && !(*p.hc < *p.r)) {
        throw ConfigError("hc must be smaller than r");
      }
      fits[c] = fit_mpl(pattern, family, p, quad, options);
    } catch (const Error& e) {
      failures[c] = e.what();
    }
  });

  std::size_t best = combos.size();
  for (std::size_t c = 0; c < combos.size(); ++c) {
    if (!fits[c]) continue;
    if (best == combos.size() ||
        *fits[c]->diagnostics.log_pseudolikelihood > *fits[best]->diagnostics.log_pseudolikelihood) {
      best = c;
    }
  }
  if (best == combos.size()) {
    std::ostringstream msg;
    msg << "every profile grid point failed for " << family_name(family) << ":";
    for (std::size_t c = 0; c < combos.size(); ++c) {
      msg << "\n  [";
      if (combos[c].r) msg << " r=" << *combos[c].r;
      if (combos[c].sat) msg << " sat=" << *combos[c].sat;
      if (combos[c].hc) msg << " hc=" << *combos[c].hc;
      msg << " ] " << failures[c];
    }
    throw DataError(msg.str());
  }

  FittedModel out = std::move(*fits[best]);
  if (uses_r) out.diagnostics.searched_grids["r"] = rs;
  if (uses_hc) out.diagnostics.searched_grids["hc"] = hcs;
  if (uses_sat) out.diagnostics.searched_grids["sat"] = std::vector<double>(sats.begin(), sats.end());
  const auto skipped = std::count_if(fits.begin(), fits.end(), [](const auto& f) { return !f; });
  if (skipped > 0) {
    out.diagnostics.notes.push_back(std::to_string(skipped) + " infeasible grid combination(s) skipped");
  }
  return out;
}

double matern_cluster_k(double t, double kappa, double r) {
  return std::numbers::pi * t * t + disc_distance_cdf(t / (2.0 * r)) / kappa;
}

double matern_contrast(const SummaryCurve& k_hat, double kappa, double r, double exponent) {
  double total = 0.0;
  double previous = 0.0;
  for (std::size_t i = 0; i < k_hat.grid.size(); ++i) {
    const double t = k_hat.grid[i];
    const double d = std::pow(std::max(k_hat.values[i], 0.0), exponent) -
                     std::pow(matern_cluster_k(t, kappa, r), exponent);
    const double sq = d * d;
    if (i > 0) total += 0.5 * (sq + previous) * (t - k_hat.grid[i - 1]);
    previous = sq;
  }
  return total;
}

FittedModel fit_matern_cluster(const PointPattern& pattern, const ContrastOptions& options) {
  if (pattern.size() < 10) {
    throw DataError("fit_matern_cluster needs at least 10 points, got " + std::to_string(pattern.size()));
  }
  const Window& w = pattern.window();
  const double side = w.shorter_side();
  const auto t_grid = options.t_grid.empty() ? linear_grid(0.01 * side, 0.25 * side, 64) : options.t_grid;
  if (t_grid.size() < 2 || t_grid.front() <= 0.0) {
    throw ConfigError("contrast grid needs at least two positive distances");
  }
  const SummaryCurve k_hat = k_function(pattern, t_grid);
  const double n = static_cast<double>(pattern.size());

  // Search box in log space.
  const double log_kappa_lo = std::log(1.0 / w.area());
  const double log_kappa_hi = std::log(100.0 * n / w.area());
  const double log_r_lo = std::log(0.005 * side);
  const double log_r_hi = std::log(0.5 * side);
  auto clamp_point = [&](std::array<double, 2> p) {
    return std::array<double, 2>{std::clamp(p[0], log_kappa_lo, log_kappa_hi),
                                 std::clamp(p[1], log_r_lo, log_r_hi)};
  };
  std::size_t evaluations = 0;
  auto objective = [&](const std::array<double, 2>& p) {
    ++evaluations;
    const auto c = clamp_point(p);
    return matern_contrast(k_hat, std::exp(c[0]), std::exp(c[1]), options.exponent);
  };

  constexpr int kCoarse = 30;
  std::array<double, 2> best{log_kappa_lo, log_r_lo};
  double best_value = std::numeric_limits<double>::infinity();
  for (int a = 0; a < kCoarse; ++a) {
    for (int b = 0; b < kCoarse; ++b) {
      const std::array<double, 2> p{log_kappa_lo + (log_kappa_hi - log_kappa_lo) * a / (kCoarse - 1),
                                    log_r_lo + (log_r_hi - log_r_lo) * b / (kCoarse - 1)};
      const double v = objective(p);
      if (v < best_value) {
        best_value = v;
        best = p;
      }
    }
  }
  if (!std::isfinite(best_value)) {
    throw NonConvergence("minimum contrast objective is not finite anywhere on the search box",
                         family::MaternCluster{std::exp(best[0]), std::exp(best[1]), 0.0});
  }

  // Nelder-Mead refinement from the best coarse point.
  std::array<std::array<double, 2>, 3> simplex{best, best, best};
  simplex[1][0] += 0.2;
  simplex[2][1] += 0.2;
  std::array<double, 3> values{best_value, objective(simplex[1]), objective(simplex[2])};
  bool converged = false;
  while (evaluations < options.max_evaluations) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    const auto lo = order[0], mid = order[1], hi = order[2];
    const double spread = values[hi] - values[lo];
    const double size = std::max({std::fabs(simplex[hi][0] - simplex[lo][0]), std::fabs(simplex[hi][1] - simplex[lo][1]),
                                  std::fabs(simplex[mid][0] - simplex[lo][0]), std::fabs(simplex[mid][1] - simplex[lo][1])});
    if (spread <= 1e-14 * (1.0 + std::fabs(values[lo])) && size < 1e-7) {
      converged = true;
      break;
    }
    const std::array<double, 2> centroid{0.5 * (simplex[lo][0] + simplex[mid][0]),
                                         0.5 * (simplex[lo][1] + simplex[mid][1])};
    auto along = [&](double coef) {
      return std::array<double, 2>{centroid[0] + coef * (simplex[hi][0] - centroid[0]),
                                   centroid[1] + coef * (simplex[hi][1] - centroid[1])};
    };
    const auto reflected = along(-1.0);
    const double fr = objective(reflected);
    if (fr < values[lo]) {
      const auto expanded = along(-2.0);
      const double fe = objective(expanded);
      if (fe < fr) {
        simplex[hi] = expanded;
        values[hi] = fe;
      } else {
        simplex[hi] = reflected;
        values[hi] = fr;
      }
    } else if (fr < values[mid]) {
      simplex[hi] = reflected;
      values[hi] = fr;
    } else {
      const auto contracted = fr < values[hi] ? along(-0.5) : along(0.5);
      const double fc = objective(contracted);
      if (fc < std::min(fr, values[hi])) {
        simplex[hi] = contracted;
        values[hi] = fc;
      } else {
        for (const int k : {mid, hi}) {
          simplex[k] = {0.5 * (simplex[k][0] + simplex[lo][0]), 0.5 * (simplex[k][1] + simplex[lo][1])};
          values[k] = objective(simplex[k]);
        }
      }
    }
  }
  const auto lowest = std::min_element(values.begin(), values.end()) - values.begin();
  const auto estimate = clamp_point(simplex[lowest]);
  const double kappa = std::exp(estimate[0]);
  const double radius = std::exp(estimate[1]);
  if (!converged) {
    throw NonConvergence("minimum contrast search exhausted its budget of " +
                             std::to_string(options.max_evaluations) + " evaluations",
                         family::MaternCluster{kappa, radius, n / (kappa * w.area())});
  }

  FittedModel fit{family::MaternCluster{kappa, radius, n / (kappa * w.area())}, w, {}};
  fit.diagnostics.data_points = pattern.size();
  fit.diagnostics.contrast = values[lowest];
  fit.diagnostics.searched_grids["t"] = t_grid;
  if (estimate[0] == log_kappa_hi || estimate[1] == log_r_lo || estimate[1] == log_r_hi ||
      estimate[0] == log_kappa_lo) {
    fit.diagnostics.notes.push_back("estimate lies on the boundary of the search box");
  }
  return fit;
}

}  // namespace cellgeo
