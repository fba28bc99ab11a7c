#include "cellgeo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "cellgeo/error.hpp"

namespace cellgeo {

void McmcConfig::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(p_birth) || !in_unit(p_death) || !in_unit(p_shift)) {
    throw ConfigError("mcmc proposal probabilities must lie in [0, 1]");
  }
  if (std::fabs(p_birth + p_death + p_shift - 1.0) > 1e-9) {
    throw ConfigError("mcmc proposal probabilities must sum to 1");
  }
  if ((p_birth > 0.0) != (p_death > 0.0)) {
    throw ConfigError("birth and death proposals must both be enabled or both disabled");
  }
  if (n_steps < 1) throw ConfigError("mcmc n_steps must be at least 1");
}

namespace {

Point uniform_in(const Window& w, Rng& rng) {
  const double x = rng.uniform(w.x_min(), w.x_max());
  const double y = rng.uniform(w.y_min(), w.y_max());
  return {x, y};
}

double first_order_term(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, family::Poisson>) {
          return m.lambda;
        } else if constexpr (std::is_same_v<M, family::MaternCluster>) {
          return m.kappa * m.mu;
        } else {
          return m.beta;
        }
      },
      spec);
}

}  // namespace

PointPattern sample_poisson(double lambda, const Window& window, RngSeed seed) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("poisson intensity must be finite and nonnegative");
  }
  Rng rng(seed);
  const std::uint64_t n = rng.poisson(lambda * window.area());
  std::vector<Point> points;
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) points.push_back(uniform_in(window, rng));
  return PointPattern(window, std::move(points));
}

MaternRealization sample_matern_cluster_full(double kappa, double r, double mu,
                                             const Window& window, RngSeed seed) {
  validate(family::MaternCluster{kappa, r, mu});
  Rng rng(seed);
  const Window parent_window = window.dilated(r);
  MaternRealization out{{}, {}, {}, PointPattern(window)};
  const std::uint64_t n_parents = rng.poisson(kappa * parent_window.area());
  out.parents.reserve(n_parents);
  for (std::uint64_t i = 0; i < n_parents; ++i) {
    out.parents.push_back(uniform_in(parent_window, rng));
  }
  std::vector<Point> kept;
  for (std::size_t p = 0; p < out.parents.size(); ++p) {
    const std::uint64_t n_daughters = rng.poisson(mu);
    for (std::uint64_t d = 0; d < n_daughters; ++d) {
      // Uniform in the disc: radius ~ r * sqrt(U).
      const double rho = r * std::sqrt(rng.uniform());
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      const Point q{out.parents[p].x + rho * std::cos(theta),
                    out.parents[p].y + rho * std::sin(theta)};
      out.daughters.push_back(q);
      out.parent_of.push_back(p);
      if (window.contains(q)) kept.push_back(q);
    }
  }
  out.pattern = PointPattern(window, std::move(kept));
  return out;
}

PointPattern sample_matern_cluster(double kappa, double r, double mu, const Window& window,
                                   RngSeed seed) {
  return sample_matern_cluster_full(kappa, r, mu, window, seed).pattern;
}

namespace {

// Largest distance at which a point influences the conditional intensity.
double interaction_range(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, family::Strauss> || std::is_same_v<M, family::GeyerSaturation>) {
          return m.r;
        } else if constexpr (std::is_same_v<M, family::StraussHardCore>) {
          return std::max(m.r, m.hc);
        } else if constexpr (std::is_same_v<M, family::PoissonHardCore>) {
          return m.hc;
        } else {
          return 0.0;
        }
      },
      spec);
}

double interaction_gamma(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, family::Strauss> || std::is_same_v<M, family::StraussHardCore> ||
                      std::is_same_v<M, family::GeyerSaturation>) {
          return m.gamma;
        } else {
          return 1.0;
        }
      },
      spec);
}

constexpr std::size_t kMaxCellsPerAxis = 256;
constexpr std::size_t kCachedPowers = 64;

std::size_t cells_along(double extent, double range) {
  if (!(range > 0.0)) return 1;
  const double n = std::floor(extent / range);
  return static_cast<std::size_t>(std::clamp(n, 1.0, static_cast<double>(kMaxCellsPerAxis)));
}

}  // namespace

GibbsChain::GibbsChain(ModelSpec spec, Window window, McmcConfig config, RngSeed seed)
    : spec_(std::move(spec)), window_(window), config_(config), rng_(seed) {
  validate(spec_);
  config_.validate();
  if (!is_gibbs(family_of(spec_))) {
    throw UnsupportedFamily("sample_gibbs handles Gibbs families only; use sample_poisson or "
                            "sample_matern_cluster for " +
                            std::string(family_name(family_of(spec_))));
  }
  range_ = interaction_range(spec_);
  nx_ = cells_along(window_.width(), range_);
  ny_ = cells_along(window_.height(), range_);
  cells_.resize(nx_ * ny_);
  x_scale_ = static_cast<double>(nx_) / window_.width();
  y_scale_ = static_cast<double>(ny_) / window_.height();
  const double gamma = interaction_gamma(spec_);
  gamma_powers_.resize(kCachedPowers);
  gamma_powers_[0] = 1.0;
  for (std::size_t t = 1; t < kCachedPowers; ++t) gamma_powers_[t] = gamma_powers_[t - 1] * gamma;
  if (config_.initial_state == McmcConfig::InitialState::Poisson) {
    const std::uint64_t n = rng_.poisson(first_order_term(spec_) * window_.area());
    points_.reserve(n);
    cell_of_.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const Point u = uniform_point();
      if (conditional(u, points_.size()) > 0.0) insert(u);
    }
  }
}

Point GibbsChain::uniform_point() { return uniform_in(window_, rng_); }

std::size_t GibbsChain::cell_index(Point p) const {
  const auto ix = std::min(nx_ - 1, static_cast<std::size_t>((p.x - window_.x_min()) * x_scale_));
  const auto iy = std::min(ny_ - 1, static_cast<std::size_t>((p.y - window_.y_min()) * y_scale_));
  return iy * nx_ + ix;
}

void GibbsChain::insert(Point p) {
  const std::size_t c = cell_index(p);
  cells_[c].push_back(static_cast<std::uint32_t>(points_.size()));
  cell_of_.push_back(static_cast<std::uint32_t>(c));
  points_.push_back(p);
}

void GibbsChain::erase(std::size_t i) {
  auto drop = [&](std::size_t cell, std::uint32_t index) {
    auto& list = cells_[cell];
    *std::find(list.begin(), list.end(), index) = list.back();
    list.pop_back();
  };
  drop(cell_of_[i], static_cast<std::uint32_t>(i));
  const std::size_t last = points_.size() - 1;
  if (i != last) {
    auto& list = cells_[cell_of_[last]];
    *std::find(list.begin(), list.end(), static_cast<std::uint32_t>(last)) = static_cast<std::uint32_t>(i);
    points_[i] = points_[last];
    cell_of_[i] = cell_of_[last];
  }
  points_.pop_back();
  cell_of_.pop_back();
}

void GibbsChain::relocate(std::size_t i, Point p) {
  const std::size_t c = cell_index(p);
  if (c != cell_of_[i]) {
    auto& list = cells_[cell_of_[i]];
    *std::find(list.begin(), list.end(), static_cast<std::uint32_t>(i)) = list.back();
    list.pop_back();
    cells_[c].push_back(static_cast<std::uint32_t>(i));
    cell_of_[i] = static_cast<std::uint32_t>(c);
  }
  points_[i] = p;
}

template <class F>
void GibbsChain::for_each_near(Point u, std::size_t skip, F&& fn) const {
  const std::size_t c = cell_index(u);
  const std::size_t cx = c % nx_;
  const std::size_t cy = c / nx_;
  const std::size_t x0 = cx == 0 ? 0 : cx - 1;
  const std::size_t y0 = cy == 0 ? 0 : cy - 1;
  const std::size_t x1 = std::min(nx_ - 1, cx + 1);
  const std::size_t y1 = std::min(ny_ - 1, cy + 1);
  for (std::size_t y = y0; y <= y1; ++y) {
    for (std::size_t x = x0; x <= x1; ++x) {
      for (const std::uint32_t j : cells_[y * nx_ + x]) {
        if (j != skip) fn(j);
      }
    }
  }
}

double GibbsChain::conditional(Point u, std::size_t skip) const {
  auto count_within = [&](Point v, double r, std::size_t also_skip, std::uint64_t cap) {
    const double r2 = r * r;
    std::uint64_t t = 0;
    for_each_near(v, skip, [&](std::uint32_t j) {
      if (j != also_skip && t < cap && squared_distance(points_[j], v) <= r2) ++t;
    });
    return t;
  };
  auto hard_core_hit = [&](double hc) {
    const double hc2 = hc * hc;
    bool hit = false;
    for_each_near(u, skip, [&](std::uint32_t j) {
      if (squared_distance(points_[j], u) < hc2) hit = true;
    });
    return hit;
  };
  auto power = [&](double beta, double gamma, std::uint64_t t) {
    if (t < gamma_powers_.size()) return beta * gamma_powers_[t];
    return beta * std::pow(gamma, static_cast<double>(t));
  };
  constexpr auto kNone = static_cast<std::size_t>(-1);
  constexpr auto kUncapped = static_cast<std::uint64_t>(-1);
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, family::Strauss>) {
          return power(m.beta, m.gamma, count_within(u, m.r, kNone, kUncapped));
        } else if constexpr (std::is_same_v<M, family::StraussHardCore>) {
          const double r2 = m.r * m.r;
          const double hc2 = m.hc * m.hc;
          std::uint64_t t = 0;
          bool hit = false;
          for_each_near(u, skip, [&](std::uint32_t j) {
            const double d2 = squared_distance(points_[j], u);
            hit = hit || d2 < hc2;
            t += d2 <= r2 ? 1 : 0;
          });
          return hit ? 0.0 : power(m.beta, m.gamma, t);
        } else if constexpr (std::is_same_v<M, family::PoissonHardCore>) {
          return hard_core_hit(m.hc) ? 0.0 : m.beta;
        } else if constexpr (std::is_same_v<M, family::GeyerSaturation>) {
          const double r2 = m.r * m.r;
          std::uint64_t t_u = 0;
          std::uint64_t back_reaction = 0;
          for_each_near(u, skip, [&](std::uint32_t j) {
            if (squared_distance(points_[j], u) > r2) return;
            ++t_u;
            if (count_within(points_[j], m.r, j, m.sat) < m.sat) ++back_reaction;
          });
          return power(m.beta, m.gamma, std::min<std::uint64_t>(m.sat, t_u) + back_reaction);
        } else {
          return papangelou(spec_, std::span<const Point>(points_), u);
        }
      },
      spec_);
}

void GibbsChain::step() {
  ++proposed_;
  const double area = window_.area();
  const double move = rng_.uniform();
  const std::size_t n = points_.size();

  if (move < config_.p_birth) {
    const Point u = uniform_point();
    const double lambda_u = conditional(u, n);
    const double ratio = lambda_u * area * config_.p_death /
                         (config_.p_birth * static_cast<double>(n + 1));
    if (rng_.uniform() < ratio) {
      insert(u);
      ++accepted_;
    }
    return;
  }
  if (n == 0) return;

  const std::size_t i = rng_.index(n);
  const double lambda_old = conditional(points_[i], i);

  if (move < config_.p_birth + config_.p_death) {
    const double ratio = static_cast<double>(n) * config_.p_birth /
                         (config_.p_death * area * lambda_old);
    if (rng_.uniform() < ratio) {
      erase(i);
      ++accepted_;
    }
    return;
  }

  const Point u = uniform_point();
  const double lambda_new = conditional(u, i);
  const double ratio = lambda_new / lambda_old;
  if (rng_.uniform() < ratio) {
    relocate(i, u);
    ++accepted_;
  }
}

PointPattern sample_gibbs(const ModelSpec& spec, const Window& window, const McmcConfig& config,
                          RngSeed seed) {
  GibbsChain chain(spec, window, config, seed);
  chain.run(config.n_steps);
  return chain.pattern();
}

PointPattern simulate(const ModelSpec& spec, const Window& window, RngSeed seed,
                      const McmcConfig& config) {
  validate(spec);
  if (const auto* p = std::get_if<family::Poisson>(&spec)) {
    return sample_poisson(p->lambda, window, seed);
  }
  if (const auto* m = std::get_if<family::MaternCluster>(&spec)) {
    return sample_matern_cluster(m->kappa, m->r, m->mu, window, seed);
  }
  return sample_gibbs(spec, window, config, seed);
}

}  // namespace cellgeo
