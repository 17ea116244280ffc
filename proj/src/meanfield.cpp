#include "icpc/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "icpc/errors.hpp"
#include "icpc/formulas.hpp"

namespace icpc {

namespace {

constexpr std::size_t kQuantileNodes = 2048;
constexpr double kCflSafety = 0.4;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Quantile of a sorted sample at q in (0,1): the order statistic with index
// floor(q*n), i.e. the generalized inverse of the empirical CDF.
double sample_quantile(std::span<const double> sorted, double q) {
  const auto n = sorted.size();
  auto idx = static_cast<std::size_t>(q * static_cast<double>(n));
  if (idx >= n) idx = n - 1;
  return sorted[idx];
}

}  // namespace

double DensityGrid::mass() const {
  return std::accumulate(values.begin(), values.end(), 0.0) * cell_width();
}

double DensityGrid::mean() const {
  const double dp = cell_width();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) s += cell_center(j) * values[j];
  return s * dp;  // mass is kept at 1
}

double DensityGrid::variance() const {
  const double dp = cell_width();
  const double mu = mean();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = cell_center(j) - mu;
    s += d * d * values[j];
  }
  return s * dp;
}

void DensityGrid::validate() const {
  if (!(std::isfinite(lower) && std::isfinite(upper) && lower < upper))
    throw ValidationError("density grid: bounds must be finite with lower < upper");
  if (m < 16) throw ValidationError("density grid: m must be >= 16");
  if (values.size() != m)
    throw ValidationError("density grid: values size must equal m");
  if (!(std::isfinite(dt) && dt > 0.0))
    throw ValidationError("density grid: dt must be > 0");
  for (double v : values)
    if (!(std::isfinite(v) && v >= 0.0))
      throw ValidationError("density grid: values must be non-negative");
}

DensityGrid DensityGrid::point_mass(double at, double lower, double upper,
                                    std::size_t m, double dt) {
  DensityGrid g;
  g.lower = lower;
  g.upper = upper;
  g.m = m;
  g.dt = dt;
  g.values.assign(m, 0.0);
  auto j = static_cast<std::size_t>(
      std::clamp((at - lower) / g.cell_width(), 0.0, static_cast<double>(m - 1)));
  g.values[j] = 1.0 / g.cell_width();
  g.validate();
  return g;
}

DensityGrid DensityGrid::gaussian(double mean, double variance, double lower,
                                  double upper, std::size_t m, double dt) {
  DensityGrid g;
  g.lower = lower;
  g.upper = upper;
  g.m = m;
  g.dt = dt;
  g.values.resize(m);
  const double sd = std::sqrt(variance);
  for (std::size_t j = 0; j < m; ++j) {
    const double z = (g.cell_center(j) - mean) / sd;
    g.values[j] = std::exp(-0.5 * z * z);
  }
  const double total = g.mass();
  for (auto& v : g.values) v /= total;
  g.validate();
  return g;
}

double stable_dt(const DensityGrid& grid, const MeanFieldConfig& cfg,
                 double ygap, double cinf) {
  const double dp = grid.cell_width();
  const double drift0 = cfg.kappa * ygap + cfg.cost_coeff * cinf +
                        cfg.reversion * cfg.beta * grid.mean();
  // The drift is linear in p, so its magnitude peaks at a domain endpoint.
  const double max_b = std::max(std::abs(drift0 - cfg.reversion * grid.lower),
                                std::abs(drift0 - cfg.reversion * grid.upper));
  double bound = std::numeric_limits<double>::infinity();
  if (max_b > 0.0) bound = std::min(bound, dp / max_b);
  if (cfg.sigma_p2 > 0.0) bound = std::min(bound, dp * dp / cfg.sigma_p2);
  return kCflSafety * bound;
}

DensityGrid fp_step(const DensityGrid& grid, const MeanFieldConfig& cfg,
                    double ygap, double cinf) {
  grid.validate();
  if (grid.dt > stable_dt(grid, cfg, ygap, cinf))
    throw StabilityViolation(
        "fp_step: dt violates the stability bound; shrink dt");

  const std::size_t m = grid.m;
  const double dp = grid.cell_width();
  const double diffusion = 0.5 * cfg.sigma_p2;
  const double drift0 = cfg.kappa * ygap + cfg.cost_coeff * cinf +
                        cfg.reversion * cfg.beta * grid.mean();

  // Total flux through each interior face; zero flux at the walls keeps the
  // scheme conservative.
  std::vector<double> flux(m + 1, 0.0);
  for (std::size_t f = 1; f < m; ++f) {
    const double p_face = grid.lower + static_cast<double>(f) * dp;
    const double b = drift0 - cfg.reversion * p_face;
    const double upwind = b >= 0.0 ? grid.values[f - 1] : grid.values[f];
    flux[f] = b * upwind - diffusion * (grid.values[f] - grid.values[f - 1]) / dp;
  }

  DensityGrid next = grid;
  for (std::size_t j = 0; j < m; ++j)
    next.values[j] = grid.values[j] - grid.dt / dp * (flux[j + 1] - flux[j]);
  return next;
}

void fp_advance_period(DensityGrid& grid, const MeanFieldConfig& cfg,
                       double ygap, double cinf) {
  double remaining = 1.0;
  while (remaining > 0.0) {
    const double bound = stable_dt(grid, cfg, ygap, cinf);
    grid.dt = std::min(remaining, bound);
    grid = fp_step(grid, cfg, ygap, cinf);
    remaining -= grid.dt;
  }
}

std::vector<double> fp_mean_path(const MeanFieldConfig& cfg,
                                 const ShockPaths& shocks, std::size_t t_len,
                                 DensityGrid initial) {
  initial.validate();
  if (shocks.ygap.size() < t_len || shocks.cinf.size() < t_len)
    throw ValidationError("fp_mean_path: shock paths shorter than t_len");
  std::vector<double> means;
  means.reserve(t_len + 1);
  means.push_back(initial.mean());
  for (std::size_t t = 0; t < t_len; ++t) {
    fp_advance_period(initial, cfg, shocks.ygap[t], shocks.cinf[t]);
    means.push_back(initial.mean());
  }
  return means;
}

double grid_quantile(const DensityGrid& grid, double q) {
  const double dp = grid.cell_width();
  double target = q * grid.mass();
  double cum = 0.0;
  for (std::size_t j = 0; j < grid.m; ++j) {
    cum += grid.values[j] * dp;
    if (cum >= target) return grid.cell_center(j);
  }
  return grid.cell_center(grid.m - 1);
}

double empirical_vs_fp_distance(std::span<const double> firm_prices,
                                const DensityGrid& grid) {
  if (firm_prices.empty())
    throw ValidationError("empirical_vs_fp_distance: empty price list");
  grid.validate();
  std::vector<double> sorted(firm_prices.begin(), firm_prices.end());
  std::sort(sorted.begin(), sorted.end());

  // Precompute the grid quantiles by sweeping the CDF once.
  const double dp = grid.cell_width();
  const double total = grid.mass();
  double acc = 0.0;
  std::size_t j = 0;
  double w1 = 0.0;
  for (std::size_t k = 0; k < kQuantileNodes; ++k) {
    const double q = (static_cast<double>(k) + 0.5) /
                     static_cast<double>(kQuantileNodes);
    const double target = q * total;
    while (j < grid.m - 1 && acc + grid.values[j] * dp < target) {
      acc += grid.values[j] * dp;
      ++j;
    }
    w1 += std::abs(sample_quantile(sorted, q) - grid.cell_center(j));
  }
  return w1 / static_cast<double>(kQuantileNodes);
}

double w1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw ValidationError("w1_distance: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double w1 = 0.0;
  for (std::size_t k = 0; k < kQuantileNodes; ++k) {
    const double q = (static_cast<double>(k) + 0.5) /
                     static_cast<double>(kQuantileNodes);
    w1 += std::abs(sample_quantile(sa, q) - sample_quantile(sb, q));
  }
  return w1 / static_cast<double>(kQuantileNodes);
}

ConvergenceResult meanfield_convergence(const ModelParams& params,
                                        const IntensityDistribution& dist,
                                        const ShockProcessSpec& spec,
                                        const ConvergenceConfig& cfg,
                                        std::uint64_t seed) {
  params.validate();
  spec.validate();
  if (cfg.n_grid.empty()) throw ValidationError("convergence: empty N grid");
  if (cfg.reps < 1) throw ValidationError("convergence: reps must be >= 1");

  const SlopePair alg = equilibrium_slopes(params);
  const std::size_t horizon = cfg.burn_in + cfg.t_eval + 1;

  // Distances are averaged over checkpoints spread across the evaluation
  // window, which damps single-snapshot noise.
  std::vector<std::size_t> checkpoints;
  for (std::size_t k = 1; k <= 10; ++k)
    checkpoints.push_back(cfg.burn_in + k * cfg.t_eval / 10);
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                    checkpoints.end());

  ConvergenceResult result;
  result.n_grid = cfg.n_grid;
  result.w1.assign(cfg.n_grid.size(), {});

  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    const std::uint64_t rep_seed = seed + 1000003 * (rep + 1);
    const ShockPaths paths = simulate_shocks(spec, horizon, rep_seed);

    // Calibration panel: pins the density initial condition, the domain and
    // the diffusion coefficient once per replication, independent of N.
    std::vector<std::size_t> cal_times{cfg.burn_in};
    cal_times.insert(cal_times.end(), checkpoints.begin(), checkpoints.end());
    const auto cal =
        simulate_firm_panel_on(params, dist, spec, paths, cfg.n_calibration,
                               rep_seed ^ 0x5bf0, cal_times,
                               cfg.reset_noise_std);
    auto moments_of = [](const std::vector<double>& prices) {
      const double n = static_cast<double>(prices.size());
      const double m =
          std::accumulate(prices.begin(), prices.end(), 0.0) / n;
      double v = 0.0;
      for (double p : prices) v += (p - m) * (p - m);
      return std::pair<double, double>(m, v / n);
    };
    const auto [mean0, var0] = moments_of(cal.snapshots.at(0));
    double var_avg = 0.0;
    for (std::size_t k = 1; k < cal.snapshots.size(); ++k)
      var_avg += moments_of(cal.snapshots[k]).second;
    var_avg /= static_cast<double>(cal.snapshots.size() - 1);

    // Time-scale matching, one density time unit per model period: the
    // drift loadings are the per-period mean-inflation loadings of the
    // panel, and the mean block enters undiscounted because the reset rule
    // already embeds the discounting in the present-value factors. The
    // reflected-OU stationary variance is sigma_p2 / 2, so matching the
    // panel's average dispersion requires sigma_p2 = 2 * var.
    MeanFieldConfig mf;
    mf.sigma_p2 = 2.0 * var_avg;
    mf.beta = 1.0;
    mf.kappa = alg.kappa / (1.0 - params.beta * spec.ygap.persistence);
    mf.cost_coeff = alg.kappa_inf / (1.0 - params.beta * spec.cinf.persistence);

    // Domain wide enough for the post-burn-in mean excursions.
    double mean_lo = mean0, mean_hi = mean0;
    {
      double mu = mean0;
      for (std::size_t t = cfg.burn_in + 1; t < horizon; ++t) {
        mu += forward_inflation(alg, params.beta, spec, paths, t);
        mean_lo = std::min(mean_lo, mu);
        mean_hi = std::max(mean_hi, mu);
      }
    }
    const double pad = 8.0 * std::sqrt(std::max(var_avg, 1e-12));
    DensityGrid density = DensityGrid::gaussian(
        mean0, std::max(var0, 1e-12), mean_lo - pad, mean_hi + pad,
        cfg.grid_cells, 1e-3);
    std::vector<DensityGrid> density_at;
    for (std::size_t t = cfg.burn_in + 1; t < horizon; ++t) {
      fp_advance_period(density, mf, paths.ygap[t], paths.cinf[t]);
      if (std::find(checkpoints.begin(), checkpoints.end(), t) !=
          checkpoints.end())
        density_at.push_back(density);
    }

    // One firm seed for every panel size: per-firm streams make the smaller
    // panels strict subsets of the larger ones under matched shocks. Every
    // (replication, checkpoint) distance enters the median pool, which keeps
    // the median stable enough to resolve the 1/sqrt(N) ordering.
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
      const auto panel = simulate_firm_panel_on(
          params, dist, spec, paths, cfg.n_grid[ni], rep_seed ^ 0x5bf0,
          checkpoints, cfg.reset_noise_std);
      for (std::size_t k = 0; k < density_at.size(); ++k)
        result.w1[ni].push_back(
            empirical_vs_fp_distance(panel.snapshots.at(k), density_at[k]));
    }
    if (rep + 1 == cfg.reps) result.final_density = density;
    result.sigma_p2 = mf.sigma_p2;
  }

  result.median_w1.reserve(cfg.n_grid.size());
  for (const auto& pooled : result.w1)
    result.median_w1.push_back(median_of(pooled));
  return result;
}

}  // namespace icpc
