#include "icpc/formulas.hpp"

#include <cmath>

#include "icpc/errors.hpp"

namespace icpc {

SlopePair closed_form_slopes(const ModelParams& params) {
  params.validate();
  const double kappa =
      (1.0 - params.theta) * (1.0 - params.beta * params.theta) / params.theta;
  return {kappa, params.lambda_bar * kappa};
}

SlopePair algorithmic_slopes(const ModelParams& params, const SlopePair& base) {
  params.validate();
  const double pr = params.phi_rho();
  return {(1.0 - pr) * base.kappa, (1.0 + pr) * base.kappa_inf};
}

SlopePair equilibrium_slopes(const ModelParams& params) {
  return algorithmic_slopes(params, closed_form_slopes(params));
}

WelfareReport welfare_decomposition(const ModelParams& params,
                                    const ShockMoments& shocks, double w_cl,
                                    double w_ai) {
  params.validate();
  shocks.validate();
  if (!(std::isfinite(w_ai) && w_ai >= 0.0))
    throw ValidationError("invalid parameter: w_ai must be >= 0");
  if (!std::isfinite(w_cl))
    throw ValidationError("invalid parameter: w_cl must be finite");

  const SlopePair base = closed_form_slopes(params);
  const double pr = params.phi_rho();

  WelfareReport report;
  report.w_cl = w_cl;
  report.w_ai = w_ai;
  report.l_inf = base.kappa_inf * base.kappa_inf * shocks.var_inf;
  report.l_alg = pr * (2.0 - pr) / (2.0 * (1.0 - pr) * (1.0 - pr)) *
                 base.kappa * base.kappa * shocks.var_ygap;
  report.w_star = report.w_cl + report.w_ai - report.l_inf - report.l_alg;
  return report;
}

double variance_share_bound(const SlopePair& alg, const ShockMoments& shocks) {
  shocks.validate();
  const double num = alg.kappa_inf * alg.kappa_inf * shocks.var_inf;
  const double den = alg.kappa * alg.kappa * shocks.var_ygap + num + shocks.var_u;
  if (den <= 0.0)
    throw ValidationError(
        "degenerate input: all variance contributions are zero");
  return num / den;
}

double taylor_coefficient(const ModelParams& params) {
  const SlopePair base = closed_form_slopes(params);
  return (1.0 + params.phi_rho()) * base.kappa_inf;
}

double optimal_inflation_target(const ModelParams& params,
                                double expected_cinf_next) {
  const SlopePair base = closed_form_slopes(params);
  if (!std::isfinite(expected_cinf_next))
    throw ValidationError("invalid parameter: expected_cinf_next not finite");
  return -base.kappa_inf * expected_cinf_next /
         (1.0 - params.beta * params.theta);
}

double indexing_cutoff(const ModelParams& params, const ShockMoments& shocks,
                       double eta_bar) {
  if (!(std::isfinite(eta_bar) && eta_bar > 0.0 && eta_bar < 1.0))
    throw ValidationError("invalid parameter: eta_bar must lie in (0,1)");
  shocks.validate();
  const SlopePair alg = equilibrium_slopes(params);

  // Share as a function of the offset pass-through ki = max(kappa_inf - psi, 0):
  //   eta(ki) = ki^2 s_i / (d0 + ki^2 s_i),  d0 = ka^2 s_y + s_u.
  const double s_i = shocks.var_inf;
  const double d0 = alg.kappa * alg.kappa * shocks.var_ygap + shocks.var_u;

  if (s_i == 0.0) {
    // Share is identically zero; any positive target is already met.
    return 0.0;
  }
  const double unadjusted = variance_share_bound(alg, shocks);
  if (eta_bar >= unadjusted) return 0.0;

  if (d0 == 0.0) {
    // Only the inference term carries variance: the share equals 1 for any
    // positive pass-through and is undefined at zero pass-through, so no
    // coefficient equates it to an interior eta_bar.
    throw InfeasiblePolicy(
        "indexing cutoff infeasible: inference cost is the only variance "
        "source, so the share cannot be driven below 1");
  }
  const double ki_target = std::sqrt(eta_bar * d0 / ((1.0 - eta_bar) * s_i));
  return alg.kappa_inf - ki_target;
}

double lucas_welfare_cost(const ModelParams& params, double var_inf) {
  if (!(std::isfinite(var_inf) && var_inf >= 0.0))
    throw ValidationError("invalid parameter: var_inf must be >= 0");
  const SlopePair alg = equilibrium_slopes(params);
  const double denom = 1.0 - params.beta * params.theta;
  return 0.5 * params.gamma * alg.kappa_inf * alg.kappa_inf * var_inf /
         (denom * denom);
}

}  // namespace icpc
