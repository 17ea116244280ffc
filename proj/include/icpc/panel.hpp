#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icpc/simulation.hpp"

namespace icpc {

// Balanced country panel after alignment: per-unit series of core
// inflation, the once-lagged inference cost index and the output gap, on a
// common period calendar. cinf_level keeps the unlagged index when known so
// datasets round-trip through CSV.
struct PanelDataset {
  std::vector<std::string> countries;
  std::vector<std::string> periods;
  // [unit][t], all units on the common calendar
  std::vector<std::vector<double>> pi_core;
  std::vector<std::vector<double>> cinf_lag1;
  std::vector<std::vector<double>> ygap;
  std::vector<std::vector<double>> cinf_level;
  bool balanced = true;
  std::size_t dropped_periods = 0;

  std::size_t n_units() const { return countries.size(); }
  std::size_t t_len() const { return periods.size(); }
  void validate() const;
};

struct WithinTransformed {
  PanelDataset demeaned;
  // Country means of (pi_core, cinf_lag1, ygap), for fixed-effect recovery.
  std::vector<std::array<double, 3>> unit_means;
};

struct PanelResult {
  double b_hat = 0.0;   // coefficient on cinf_lag1
  double xi_hat = 0.0;  // coefficient on ygap
  std::array<double, 2> dk_se{0.0, 0.0};
  Eigen::Matrix2d vcov = Eigen::Matrix2d::Zero();
  double r2_within = 0.0;
  std::vector<double> fixed_effects;
  int bandwidth = 0;
  std::size_t n_units = 0;
  std::size_t t_len = 0;
  // 95% critical value for b_hat +- crit_95 * se intervals: a t quantile
  // with T-1 degrees of freedom, inflated for the absorbed unit means and
  // slopes. Kernel variance estimates are noticeably downward-noisy at
  // T ~ 50, and plain 1.96 intervals undercover there.
  double crit_95 = 1.959963984540054;
  // p-value against an external coefficient; negative until a Wald test
  // has been run on this result.
  double wald_p = -1.0;
};

// Demeans every variable by its country mean and keeps the means.
WithinTransformed within_transform(const PanelDataset& data);

// Within-group OLS of pi_core on (cinf_lag1, ygap) with Driscoll-Kraay
// standard errors: Newey-West applied to the period-wise cross-sectional
// sums of the score vectors. With one unit this is exactly time-series OLS
// with Newey-West errors.
PanelResult driscoll_kraay(const PanelDataset& data,
                           std::optional<int> bandwidth = std::nullopt);

// p-value of the Wald test of b_hat against an externally estimated
// coefficient: (b - external)^2 / (se_b^2 + external_se^2) ~ chi2(1).
double wald_equality(const PanelResult& result, double external_coef,
                     double external_se);

// Synthetic panel generated from the reduced-form equation with country
// fixed effects, AR(1) regressors and an error that mixes a common
// cross-sectional shock with idiosyncratic noise. common_regressor_share
// is the variance share of a common AR(1) component inside each regressor
// (compute price indices co-move strongly across countries).
struct PanelDgp {
  double b = 0.094;
  double xi = 0.038;
  double alpha_std = 0.5;
  double idio_std = 0.2;
  double common_std = 0.0;
  double common_regressor_share = 0.0;
  Ar1Spec cinf{0.8, 1.0};
  Ar1Spec ygap{0.7, 1.0};
};

PanelDataset simulate_panel(const PanelDgp& dgp, std::size_t n_units,
                            std::size_t t_len, std::uint64_t seed);

}  // namespace icpc
