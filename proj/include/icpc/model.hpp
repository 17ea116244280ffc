#pragma once

#include <string>

namespace icpc {

// Calibration tuple of the sticky-price model with an AI inference cost
// wedge. theta is Calvo stickiness, beta the discount factor, lambda_bar the
// mean AI intensity, phi the penetration of algorithmic price setters and
// rho their near-collusive responsiveness. omega weighs the output gap in
// the quadratic loss, gamma is relative risk aversion.
struct ModelParams {
  double theta = 0.75;
  double beta = 0.996;
  double lambda_bar = 0.18;
  double phi = 0.32;
  double rho = 0.20;
  double omega = 0.50;
  double gamma = 2.0;

  double phi_rho() const { return phi * rho; }

  // Throws ValidationError unless
  //   theta, beta in (0,1); lambda_bar, phi in [0,1]; rho in [0,1);
  //   phi*rho < 1; omega in (0,1]; gamma > 0.
  // Boundary values of theta and beta are rejected, not extrapolated.
  void validate() const;
};

// Output-gap slope and inference pass-through of the inflation equation.
struct SlopePair {
  double kappa = 0.0;
  double kappa_inf = 0.0;
};

// Unconditional variances of the inference-cost index, the output gap and
// the cost-push shock.
struct ShockMoments {
  double var_inf = 0.0;
  double var_ygap = 0.0;
  double var_u = 0.0;

  // Non-negativity; callers needing a positive denominator check that
  // themselves.
  void validate() const;
};

// Additive welfare decomposition: w_star = w_cl + w_ai - l_inf - l_alg.
struct WelfareReport {
  double w_cl = 0.0;
  double w_ai = 0.0;
  double l_inf = 0.0;
  double l_alg = 0.0;
  double w_star = 0.0;
};

// Policy quantities: Taylor-rule response coefficient on the inference cost
// index, time-varying optimal inflation target, and the variance-share
// upper bound.
struct PolicyReport {
  double psi_inf_star = 0.0;
  double pi_target = 0.0;
  double eta_inf_bound = 0.0;
};

}  // namespace icpc
