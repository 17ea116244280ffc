#include "icpc/gmm.hpp"

#include <cmath>

#include "icpc/errors.hpp"
#include "icpc/formulas.hpp"
#include "icpc/parallel.hpp"

namespace icpc {

namespace {

constexpr std::size_t kMinSample = 24;

// Weighted linear IV solve: argmin of (Z'(y-Xb)/T)' W (Z'(y-Xb)/T).
Eigen::Vector2d solve_step(const Eigen::MatrixXd& zx, const Eigen::VectorXd& zy,
                           const Eigen::MatrixXd& w) {
  const Eigen::Matrix2d a = zx.transpose() * w * zx;
  Eigen::FullPivLU<Eigen::Matrix2d> lu(a);
  if (!lu.isInvertible())
    throw NumericalError("rank deficiency: weak or collinear instruments");
  return lu.solve(zx.transpose() * w * zy);
}

Eigen::MatrixXd invert_weight(const Eigen::MatrixXd& s, bool& ridge_used) {
  const auto l = s.rows();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(l, l));
    if (inv.allFinite()) return inv;
  }
  // Near-singular long-run covariance: fall back to a ridged inverse and
  // flag it in the result.
  ridge_used = true;
  const Eigen::MatrixXd ridged =
      s + 1e-10 * s.trace() / static_cast<double>(l) *
              Eigen::MatrixXd::Identity(l, l);
  Eigen::LDLT<Eigen::MatrixXd> ldlt2(ridged);
  const Eigen::MatrixXd inv = ldlt2.solve(Eigen::MatrixXd::Identity(l, l));
  if (ldlt2.info() != Eigen::Success || !inv.allFinite())
    throw NumericalError("long-run covariance not invertible even with ridge");
  return inv;
}

double log10_safe(double v) {
  if (!(v > 0.0)) throw NumericalError("log of non-positive value");
  return std::log10(v);
}

}  // namespace

void InstrumentSpec::validate() const {
  if (pi_lags < 0 || ygap_lags < 0 || cinf_lags < 0)
    throw ValidationError("instrument lags must be >= 0");
  if (pi_lags + ygap_lags + cinf_lags < 1)
    throw ValidationError("at least one lagged instrument is required");
  if (count() < 2)
    throw ValidationError("instrument count must be >= 2 (parameter count)");
}

int automatic_bandwidth(std::size_t t_obs) {
  return static_cast<int>(std::floor(
      4.0 * std::pow(static_cast<double>(t_obs) / 100.0, 2.0 / 9.0)));
}

IvMatrices build_iv_matrices(const TimeSeriesDataset& data,
                             const InstrumentSpec& spec, double beta) {
  data.validate();
  spec.validate();
  const auto t_total = static_cast<std::ptrdiff_t>(data.size());
  const std::ptrdiff_t first = spec.max_lag();
  const std::ptrdiff_t t_eff = t_total - first - 1;
  if (t_total < static_cast<std::ptrdiff_t>(kMinSample) || t_eff < spec.count())
    throw ValidationError("insufficient sample: need T >= " +
                          std::to_string(kMinSample) +
                          " and more usable periods than instruments");

  IvMatrices sys;
  sys.y.resize(t_eff);
  sys.x.resize(t_eff, 2);
  sys.z.resize(t_eff, spec.count());
  for (std::ptrdiff_t r = 0; r < t_eff; ++r) {
    const std::ptrdiff_t t = first + r;
    sys.y(r) = data.pi[t] - beta * data.pi_e[t];
    sys.x(r, 0) = data.ygap[t];
    sys.x(r, 1) = data.cinf[t];
    int c = 0;
    if (spec.constant) sys.z(r, c++) = 1.0;
    for (int l = 1; l <= spec.pi_lags; ++l) sys.z(r, c++) = data.pi[t - l];
    for (int l = 1; l <= spec.ygap_lags; ++l) sys.z(r, c++) = data.ygap[t - l];
    for (int l = 1; l <= spec.cinf_lags; ++l) sys.z(r, c++) = data.cinf[t - l];
  }
  return sys;
}

Eigen::MatrixXd moment_vector(const TimeSeriesDataset& data,
                              const InstrumentSpec& spec, double beta,
                              double kappa, double kappa_inf) {
  const IvMatrices sys = build_iv_matrices(data, spec, beta);
  const Eigen::VectorXd resid =
      sys.y - sys.x * Eigen::Vector2d(kappa, kappa_inf);
  return sys.z.array().colwise() * resid.array();
}

Eigen::MatrixXd newey_west(const Eigen::MatrixXd& moments, int bandwidth) {
  const auto t_obs = moments.rows();
  const auto l = moments.cols();
  if (bandwidth < 0) throw ValidationError("bandwidth must be >= 0");
  if (bandwidth >= t_obs)
    throw ValidationError("bandwidth must be smaller than the sample length");

  const Eigen::MatrixXd centered = moments.rowwise() - moments.colwise().mean();
  Eigen::MatrixXd s =
      centered.transpose() * centered / static_cast<double>(t_obs);
  for (int j = 1; j <= bandwidth; ++j) {
    const double w = 1.0 - static_cast<double>(j) / (bandwidth + 1.0);
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(l, l);
    for (Eigen::Index t = j; t < t_obs; ++t)
      gamma += centered.row(t).transpose() * centered.row(t - j);
    gamma /= static_cast<double>(t_obs);
    s += w * (gamma + gamma.transpose());
  }
  return s;
}

GmmResult two_step_gmm(const IvMatrices& sys, std::optional<int> bandwidth,
                       FirstStepWeight first_step) {
  const auto t_eff = static_cast<double>(sys.y.size());
  const auto l = sys.z.cols();
  if (sys.x.rows() != sys.y.size() || sys.z.rows() != sys.y.size())
    throw ValidationError("misaligned estimation system");

  const Eigen::MatrixXd zx = sys.z.transpose() * sys.x / t_eff;
  const Eigen::VectorXd zy = sys.z.transpose() * sys.y / t_eff;

  // Guard against a deficient design before any weighting.
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(zx);
    if (svd.singularValues()(1) <
        1e-12 * std::max(1.0, svd.singularValues()(0)))
      throw NumericalError("rank deficiency: weak or collinear instruments");
  }

  GmmResult result;
  result.t_eff = static_cast<std::size_t>(sys.y.size());
  result.bandwidth = bandwidth ? *bandwidth : automatic_bandwidth(result.t_eff);
  if (result.bandwidth < 0 ||
      result.bandwidth >= static_cast<int>(result.t_eff))
    throw ValidationError("bandwidth must lie in [0, T_eff)");

  Eigen::MatrixXd w0;
  if (first_step == FirstStepWeight::kTwoSls) {
    bool ridge0 = false;
    w0 = invert_weight(sys.z.transpose() * sys.z / t_eff, ridge0);
  } else {
    w0 = Eigen::MatrixXd::Identity(l, l);
  }
  const Eigen::Vector2d b1 = solve_step(zx, zy, w0);
  result.kappa_first = b1(0);
  result.kappa_inf_first = b1(1);

  const Eigen::VectorXd resid1 = sys.y - sys.x * b1;
  const Eigen::MatrixXd moments1 = sys.z.array().colwise() * resid1.array();
  const Eigen::MatrixXd s = newey_west(moments1, result.bandwidth);
  const Eigen::MatrixXd w1 = invert_weight(s, result.ridge_used);

  const Eigen::Vector2d b2 = solve_step(zx, zy, w1);
  result.kappa_hat = b2(0);
  result.kappa_inf_hat = b2(1);

  // Sandwich at the optimal weight collapses to (G' S^-1 G)^-1 / T.
  const Eigen::Matrix2d meat = zx.transpose() * w1 * zx;
  Eigen::FullPivLU<Eigen::Matrix2d> lu(meat);
  if (!lu.isInvertible())
    throw NumericalError("rank deficiency in the covariance sandwich");
  result.vcov = lu.inverse() / t_eff;
  result.hac_se = {std::sqrt(result.vcov(0, 0)), std::sqrt(result.vcov(1, 1))};

  const Eigen::VectorXd gbar = zy - zx * b2;
  result.j_stat = t_eff * gbar.dot(w1 * gbar);
  result.j_dof = static_cast<int>(l) - 2;
  return result;
}

GmmResult two_step_gmm(const TimeSeriesDataset& data,
                       const InstrumentSpec& spec, double beta,
                       std::optional<int> bandwidth,
                       FirstStepWeight first_step) {
  return two_step_gmm(build_iv_matrices(data, spec, beta), bandwidth,
                      first_step);
}

ConsistencyStudy consistency_study(const ModelParams& params,
                                   const ShockProcessSpec& spec,
                                   const InstrumentSpec& instruments,
                                   const std::vector<std::size_t>& t_grid,
                                   std::size_t reps, std::uint64_t seed) {
  params.validate();
  spec.validate();
  instruments.validate();
  if (t_grid.empty()) throw ValidationError("empty T grid");
  if (reps < 1) throw ValidationError("reps must be >= 1");

  const SlopePair truth = equilibrium_slopes(params);
  ConsistencyStudy study;
  study.truth = truth;

  for (std::size_t gi = 0; gi < t_grid.size(); ++gi) {
    const std::size_t t_len = t_grid[gi];
    struct RepOutcome {
      double err_k = 0.0, err_ki = 0.0;
      bool cover_k = false, cover_ki = false;
    };
    std::vector<RepOutcome> outcomes(reps);
    parallel_for(reps, [&](std::size_t rep) {
      const std::uint64_t rep_seed = seed + rep + 1000003 * gi;
      const auto data = simulate_aggregate(params, spec, t_len, rep_seed);
      const auto fit = two_step_gmm(data, instruments, params.beta);
      RepOutcome& o = outcomes[rep];
      o.err_k = fit.kappa_hat - truth.kappa;
      o.err_ki = fit.kappa_inf_hat - truth.kappa_inf;
      o.cover_k = std::abs(o.err_k) <= 1.959963984540054 * fit.hac_se[0];
      o.cover_ki = std::abs(o.err_ki) <= 1.959963984540054 * fit.hac_se[1];
    });

    ConsistencyRow row;
    row.t_len = t_len;
    row.reps = reps;
    double sk = 0.0, ski = 0.0;
    std::size_t ck = 0, cki = 0;
    for (const auto& o : outcomes) {
      sk += o.err_k * o.err_k;
      ski += o.err_ki * o.err_ki;
      ck += o.cover_k ? 1 : 0;
      cki += o.cover_ki ? 1 : 0;
    }
    row.rmse_kappa = std::sqrt(sk / static_cast<double>(reps));
    row.rmse_kappa_inf = std::sqrt(ski / static_cast<double>(reps));
    row.coverage_kappa = static_cast<double>(ck) / static_cast<double>(reps);
    row.coverage_kappa_inf =
        static_cast<double>(cki) / static_cast<double>(reps);
    study.rows.push_back(row);
  }

  // Fitted log-log slope of RMSE against sample size.
  if (t_grid.size() >= 2) {
    double sx = 0, sxx = 0, sy_k = 0, sxy_k = 0, sy_i = 0, sxy_i = 0;
    const auto n = static_cast<double>(study.rows.size());
    for (const auto& row : study.rows) {
      const double x = log10_safe(static_cast<double>(row.t_len));
      sx += x;
      sxx += x * x;
      sy_k += log10_safe(row.rmse_kappa);
      sxy_k += x * log10_safe(row.rmse_kappa);
      sy_i += log10_safe(row.rmse_kappa_inf);
      sxy_i += x * log10_safe(row.rmse_kappa_inf);
    }
    const double denom = n * sxx - sx * sx;
    study.slope_kappa = (n * sxy_k - sx * sy_k) / denom;
    study.slope_kappa_inf = (n * sxy_i - sx * sy_i) / denom;
  }
  return study;
}

}  // namespace icpc
