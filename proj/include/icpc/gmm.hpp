#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "icpc/dataset.hpp"
#include "icpc/model.hpp"
#include "icpc/simulation.hpp"

namespace icpc {

// Lagged instrument set for the linear moment condition. Lags count back
// from t, so every instrument is predetermined at t.
struct InstrumentSpec {
  int pi_lags = 1;
  int ygap_lags = 1;
  int cinf_lags = 2;
  bool constant = true;

  int count() const {
    return (constant ? 1 : 0) + pi_lags + ygap_lags + cinf_lags;
  }
  int max_lag() const {
    return std::max({pi_lags, ygap_lags, cinf_lags, 1});
  }
  // Lags >= 1 where used, and at least as many instruments as parameters.
  void validate() const;
};

enum class FirstStepWeight {
  kTwoSls,    // (Z'Z/T)^-1; invariant to instrument rescaling
  kIdentity,  // plain identity weight
};

struct GmmResult {
  double kappa_hat = 0.0;
  double kappa_inf_hat = 0.0;
  std::array<double, 2> hac_se{0.0, 0.0};
  Eigen::Matrix2d vcov = Eigen::Matrix2d::Zero();
  double j_stat = 0.0;
  int j_dof = 0;
  double kappa_first = 0.0;
  double kappa_inf_first = 0.0;
  int bandwidth = 0;
  std::size_t t_eff = 0;
  bool ridge_used = false;
};

// Standard automatic Newey-West bandwidth: floor(4 * (T/100)^(2/9)).
int automatic_bandwidth(std::size_t t_obs);

// The stacked estimation system: dependent moments y_t = pi_t - beta*pi_e(t),
// regressors x_t = (ygap_t, cinf_t), instruments z_t from lags. Rows cover
// t = max_lag .. T-2, so T_eff = T - max_lag - 1.
struct IvMatrices {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;  // T_eff x 2
  Eigen::MatrixXd z;  // T_eff x L
};

IvMatrices build_iv_matrices(const TimeSeriesDataset& data,
                             const InstrumentSpec& spec, double beta);

// Per-period moment matrix (T_eff x L): row t is z_{t-1} times the
// residual pi_t - beta*pi_e(t) - kappa*ygap_t - kappa_inf*cinf_t, where
// pi_e(t) is the expectation of pi_{t+1} held at t.
Eigen::MatrixXd moment_vector(const TimeSeriesDataset& data,
                              const InstrumentSpec& spec, double beta,
                              double kappa, double kappa_inf);

// Newey-West long-run covariance of a per-period moment matrix: the sample
// autocovariances of the demeaned columns combined with Bartlett weights
// 1 - j/(bw+1). Symmetric positive semi-definite by construction.
Eigen::MatrixXd newey_west(const Eigen::MatrixXd& moments, int bandwidth);

// Two-step efficient estimation of (kappa, kappa_inf) with beta fixed at
// its calibrated value. The moment is linear in the parameters, so each
// step solves a weighted linear IV system in closed form. Reports the HAC
// sandwich covariance at the optimal weight and the J statistic with
// L - 2 degrees of freedom.
GmmResult two_step_gmm(const TimeSeriesDataset& data,
                       const InstrumentSpec& spec, double beta,
                       std::optional<int> bandwidth = std::nullopt,
                       FirstStepWeight first_step = FirstStepWeight::kTwoSls);

// Matrix-level core of the estimator, for callers that assemble their own
// instrument set.
GmmResult two_step_gmm(const IvMatrices& sys,
                       std::optional<int> bandwidth = std::nullopt,
                       FirstStepWeight first_step = FirstStepWeight::kTwoSls);

// Monte Carlo consistency study: simulate, estimate, and tabulate RMSE and
// nominal-95% coverage per sample size, plus the fitted slope of log RMSE
// on log T.
struct ConsistencyRow {
  std::size_t t_len = 0;
  std::size_t reps = 0;
  double rmse_kappa = 0.0;
  double rmse_kappa_inf = 0.0;
  double coverage_kappa = 0.0;
  double coverage_kappa_inf = 0.0;
};

struct ConsistencyStudy {
  std::vector<ConsistencyRow> rows;
  double slope_kappa = 0.0;      // d log10 RMSE / d log10 T
  double slope_kappa_inf = 0.0;
  SlopePair truth;
};

// Replication r of grid entry g simulates with seed
//   seed + r + 1000003 * g
// so runs are reproducible and replications independent.
ConsistencyStudy consistency_study(const ModelParams& params,
                                   const ShockProcessSpec& spec,
                                   const InstrumentSpec& instruments,
                                   const std::vector<std::size_t>& t_grid,
                                   std::size_t reps, std::uint64_t seed);

}  // namespace icpc
