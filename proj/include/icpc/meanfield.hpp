#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "icpc/model.hpp"
#include "icpc/simulation.hpp"

namespace icpc {

// Discretized cross-sectional log-price density on a bounded grid of m
// equal cells over [lower, upper]; values are cell-average densities, so
// sum(values) * cell_width() is the total mass (kept at 1).
struct DensityGrid {
  double lower = -1.0;
  double upper = 1.0;
  std::size_t m = 64;
  double dt = 1e-3;
  std::vector<double> values;

  double cell_width() const { return (upper - lower) / static_cast<double>(m); }
  double cell_center(std::size_t j) const {
    return lower + (static_cast<double>(j) + 0.5) * cell_width();
  }
  double mass() const;
  double mean() const;
  double variance() const;

  void validate() const;

  // All mass in the cell containing `at`.
  static DensityGrid point_mass(double at, double lower, double upper,
                                std::size_t m, double dt);
  // Discretized normal density, renormalized to unit mass on the domain.
  static DensityGrid gaussian(double mean, double variance, double lower,
                              double upper, std::size_t m, double dt);
};

// Drift and diffusion inputs of the cross-sectional density dynamics. The
// drift at log price p is
//   b(p) = kappa * ygap + cost_coeff * cinf
//        + reversion * (beta * mean(density) - p)
// and sigma_p2 is the diffusion coefficient. reversion = 1 is the standard
// drift; 0 switches the discounted-mean reversion block off, which the
// pure-diffusion and pure-advection oracle cases need.
struct MeanFieldConfig {
  double sigma_p2 = 0.0;
  double kappa = 0.0;
  double cost_coeff = 0.0;  // mean-intensity-weighted cost pass-through
  double beta = 0.996;
  double reversion = 1.0;
};

// Largest stable explicit step for the current drift/diffusion magnitudes:
// 0.4 * min(dp / max|b|, dp^2 / sigma_p2).
double stable_dt(const DensityGrid& grid, const MeanFieldConfig& cfg,
                 double ygap, double cinf);

// One explicit step: upwind advection of the drift, central differencing of
// the diffusion, reflecting (zero-flux) boundaries. Mass is conserved and
// non-negativity preserved. Throws StabilityViolation when grid.dt exceeds
// the stable step.
DensityGrid fp_step(const DensityGrid& grid, const MeanFieldConfig& cfg,
                    double ygap, double cinf);

// Integrate one unit of time (one model period) with internally chosen
// substeps that satisfy the stability bound.
void fp_advance_period(DensityGrid& grid, const MeanFieldConfig& cfg,
                       double ygap, double cinf);

// Mean log-price path over t_len periods driven by the shock paths;
// element 0 is the initial mean, element t the mean after period t. First
// differences are the mean-field inflation series.
std::vector<double> fp_mean_path(const MeanFieldConfig& cfg,
                                 const ShockPaths& shocks, std::size_t t_len,
                                 DensityGrid initial);

// Wasserstein-1 distance via quantile integration on 2048 nodes, treating
// the grid as a discrete measure on cell centers.
double empirical_vs_fp_distance(std::span<const double> firm_prices,
                                const DensityGrid& grid);

// Empirical-vs-empirical W1 on the same quantile nodes.
double w1_distance(std::span<const double> a, std::span<const double> b);

// Inverse CDF of the grid measure at q in (0,1).
double grid_quantile(const DensityGrid& grid, double q);

// Convergence study of the firm-panel empirical price measure toward the
// density dynamics under matched shocks.
struct ConvergenceConfig {
  std::vector<std::size_t> n_grid{100, 1000, 10000};
  std::size_t burn_in = 60;
  std::size_t t_eval = 60;
  std::size_t reps = 31;
  std::size_t grid_cells = 256;
  std::size_t n_calibration = 2000;
  // Idiosyncratic pricing error on each reset, the particle counterpart of
  // the density diffusion. Zero would leave the panel cross-section a
  // mixture of vintage atoms that no diffusive density matches.
  double reset_noise_std = 0.5;
};

struct ConvergenceResult {
  std::vector<std::size_t> n_grid;
  std::vector<double> median_w1;        // per entry of n_grid
  std::vector<std::vector<double>> w1;  // [n index][rep x checkpoint], pooled
  double sigma_p2 = 0.0;                // diffusion used
  DensityGrid final_density;            // from the last replication
};

ConvergenceResult meanfield_convergence(const ModelParams& params,
                                        const IntensityDistribution& dist,
                                        const ShockProcessSpec& spec,
                                        const ConvergenceConfig& cfg,
                                        std::uint64_t seed);

}  // namespace icpc
