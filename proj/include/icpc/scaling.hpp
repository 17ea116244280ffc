#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "icpc/gmm.hpp"
#include "icpc/model.hpp"
#include "icpc/simulation.hpp"

namespace icpc {

// Log-log regression of estimated pass-through on mean AI intensity across
// simulated windows: log10 kappa_inf_hat = a + b log10 lambda_bar.
struct ScalingResult {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double r2 = 0.0;
  double se_a = 0.0;      // classical OLS standard errors
  double se_b = 0.0;
  double se_a_hac = 0.0;  // Newey-West with the automatic bandwidth
  double se_b_hac = 0.0;
  std::size_t n_windows = 0;
  std::size_t n_failed = 0;
  // Per-window (lambda_bar, kappa_inf_hat), in deterministic window order.
  std::vector<std::pair<double, double>> points;
};

// For each lambda_bar in the grid, simulate windows_per_lambda datasets of
// length t_window, estimate the pass-through by two-step GMM, pool the
// log-log points and fit by OLS. Windows whose estimation fails (or whose
// estimate is non-positive, leaving the log undefined) are dropped and
// counted in n_failed.
ScalingResult scaling_experiment(const ModelParams& base,
                                 const ShockProcessSpec& spec,
                                 const InstrumentSpec& instruments,
                                 const std::vector<double>& lambda_grid,
                                 std::size_t t_window,
                                 std::size_t windows_per_lambda,
                                 std::uint64_t seed);

}  // namespace icpc
