#pragma once

#include "icpc/model.hpp"

namespace icpc {

// Closed-form slopes of the inflation equation:
//   kappa     = (1 - theta)(1 - beta*theta) / theta
//   kappa_inf = lambda_bar * kappa
SlopePair closed_form_slopes(const ModelParams& params);

// Algorithmic-pricing adjustment of a baseline slope pair:
//   kappa^ALG     = (1 - phi*rho) * kappa
//   kappa_inf^ALG = (1 + phi*rho) * kappa_inf
SlopePair algorithmic_slopes(const ModelParams& params, const SlopePair& base);

// Convenience: algorithmic slopes straight from the calibration.
SlopePair equilibrium_slopes(const ModelParams& params);

// Welfare decomposition around caller-supplied benchmark levels:
//   l_inf  = (lambda_bar*kappa)^2 * var_inf
//   l_alg  = phi*rho*(2 - phi*rho) / (2*(1 - phi*rho)^2) * kappa^2 * var_ygap
//   w_star = w_cl + w_ai - l_inf - l_alg
// w_cl and w_ai are levels with no structural form here; they default to 0
// so the report reads as losses relative to an arbitrary benchmark.
WelfareReport welfare_decomposition(const ModelParams& params,
                                    const ShockMoments& shocks,
                                    double w_cl = 0.0, double w_ai = 0.0);

// Upper bound on the share of inflation variance attributable to inference
// cost shocks:
//   (ki^2 var_inf) / (ka^2 var_ygap + ki^2 var_inf + var_u)
// with (ka, ki) the algorithmic slope pair. Throws ValidationError when all
// variance contributions vanish.
double variance_share_bound(const SlopePair& alg, const ShockMoments& shocks);

// Welfare-maximizing Taylor-rule response on the inference cost index:
//   psi*_inf = (1 + phi*rho) * lambda_bar * kappa
double taylor_coefficient(const ModelParams& params);

// Inference-adjusted optimal inflation target:
//   pi*_t = -lambda_bar * kappa * E_t[c_inf_{t+1}] / (1 - beta*theta)
double optimal_inflation_target(const ModelParams& params,
                                double expected_cinf_next);

// Indexing coefficient psi >= 0 that equates the variance-share bound to
// eta_bar when the pass-through is offset as max(kappa_inf^ALG - psi, 0).
// Returns 0 when the unadjusted bound is already <= eta_bar. Throws
// InfeasiblePolicy when no non-negative coefficient attains eta_bar (e.g.
// the inference term is the only variance source, pinning the share at 1).
double indexing_cutoff(const ModelParams& params, const ShockMoments& shocks,
                       double eta_bar);

// Compensating consumption equivalent of inference-induced inflation
// volatility:
//   dC* = (1/2) * gamma * (kappa_inf^ALG)^2 * var_inf / (1 - beta*theta)^2
double lucas_welfare_cost(const ModelParams& params, double var_inf);

}  // namespace icpc
