#include "icpc/scaling.hpp"

#include <cmath>
#include <optional>

#include "icpc/errors.hpp"
#include "icpc/parallel.hpp"

namespace icpc {

ScalingResult scaling_experiment(const ModelParams& base,
                                 const ShockProcessSpec& spec,
                                 const InstrumentSpec& instruments,
                                 const std::vector<double>& lambda_grid,
                                 std::size_t t_window,
                                 std::size_t windows_per_lambda,
                                 std::uint64_t seed) {
  base.validate();
  spec.validate();
  instruments.validate();
  for (double lam : lambda_grid)
    if (!(std::isfinite(lam) && lam > 0.0 && lam <= 1.0))
      throw ValidationError(
          "scaling: lambda grid values must lie in (0,1] for the log fit");
  const std::size_t n_jobs = lambda_grid.size() * windows_per_lambda;
  if (n_jobs < 3)
    throw ValidationError("scaling: need at least 3 windows for a regression");
  if (lambda_grid.size() < 2)
    throw ValidationError(
        "scaling: need at least 2 distinct lambda values for a slope");

  std::vector<std::optional<std::pair<double, double>>> outcomes(n_jobs);
  parallel_for(n_jobs, [&](std::size_t job) {
    const std::size_t li = job / windows_per_lambda;
    ModelParams params = base;
    params.lambda_bar = lambda_grid[li];
    try {
      const auto data =
          simulate_aggregate(params, spec, t_window, seed + 7717 * (job + 1));
      const auto fit = two_step_gmm(data, instruments, params.beta);
      if (fit.kappa_inf_hat > 0.0)
        outcomes[job] = std::make_pair(params.lambda_bar, fit.kappa_inf_hat);
    } catch (const NumericalError&) {
      // dropped and counted below
    }
  });

  ScalingResult result;
  for (const auto& o : outcomes) {
    if (o)
      result.points.push_back(*o);
    else
      ++result.n_failed;
  }
  result.n_windows = result.points.size();
  if (result.n_windows < 3)
    throw NumericalError("scaling: fewer than 3 usable windows");

  // Pooled OLS of log10 kappa_inf_hat on log10 lambda_bar.
  const auto n = static_cast<double>(result.n_windows);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [lam, ki] : result.points) {
    const double x = std::log10(lam);
    const double y = std::log10(ki);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double xbar = sx / n;
  const double ybar = sy / n;
  const double sxx_c = sxx - n * xbar * xbar;
  if (sxx_c <= 0.0)
    throw ValidationError(
        "scaling: no variation in lambda across windows; slope undefined");
  result.b_hat = (sxy - n * xbar * ybar) / sxx_c;
  result.a_hat = ybar - result.b_hat * xbar;

  double ssr = 0.0, sst = 0.0;
  Eigen::MatrixXd scores(result.n_windows, 2);
  Eigen::Matrix2d xtx = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < result.n_windows; ++i) {
    const double x = std::log10(result.points[i].first);
    const double y = std::log10(result.points[i].second);
    const double e = y - result.a_hat - result.b_hat * x;
    ssr += e * e;
    sst += (y - ybar) * (y - ybar);
    const Eigen::Vector2d xv(1.0, x);
    scores.row(i) = (xv * e).transpose();
    xtx += xv * xv.transpose();
  }
  result.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;

  const double sigma2 = ssr / (n - 2.0);
  const Eigen::Matrix2d xtx_inv = xtx.inverse();
  result.se_a = std::sqrt(sigma2 * xtx_inv(0, 0));
  result.se_b = std::sqrt(sigma2 * xtx_inv(1, 1));

  const Eigen::MatrixXd s_hat =
      newey_west(scores, automatic_bandwidth(result.n_windows));
  const Eigen::Matrix2d vcov_hac =
      xtx_inv * (n * s_hat) * xtx_inv;
  result.se_a_hac = std::sqrt(vcov_hac(0, 0));
  result.se_b_hac = std::sqrt(vcov_hac(1, 1));
  return result;
}

}  // namespace icpc
