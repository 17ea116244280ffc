#include "icpc/panel.hpp"

#include <cmath>

#include "icpc/errors.hpp"
#include "icpc/gmm.hpp"
#include "icpc/rng.hpp"

namespace icpc {

namespace {

constexpr std::size_t kMinPeriods = 24;

double chi2_1_pvalue(double w) {
  // Survival function of chi-square with one degree of freedom.
  return std::erfc(std::sqrt(w / 2.0));
}

// 97.5% Student-t quantile via the Cornish-Fisher expansion in 1/nu;
// accurate to about 1e-4 for nu >= 20.
double t_quantile_975(double nu) {
  const double z = 1.959963984540054;
  const double z3 = z * z * z;
  const double z5 = z3 * z * z;
  return z + (z3 + z) / (4.0 * nu) +
         (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu);
}

}  // namespace

void PanelDataset::validate() const {
  const std::size_t n = n_units();
  const std::size_t t = t_len();
  if (n < 1) throw ValidationError("panel: no units");
  if (pi_core.size() != n || cinf_lag1.size() != n || ygap.size() != n)
    throw ValidationError("panel: per-unit column count mismatch");
  if (!cinf_level.empty() && cinf_level.size() != n)
    throw ValidationError("panel: cinf_level column count mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (pi_core[j].size() != t || cinf_lag1[j].size() != t ||
        ygap[j].size() != t)
      throw ValidationError("panel: unit " + countries[j] +
                            " misaligned with the period calendar");
    if (!cinf_level.empty() && cinf_level[j].size() != t)
      throw ValidationError("panel: unit " + countries[j] +
                            " cinf_level misaligned");
  }
  for (std::size_t i = 1; i < periods.size(); ++i)
    if (!(periods[i - 1] < periods[i]))
      throw ValidationError("panel: periods not strictly increasing at " +
                            periods[i]);
}

WithinTransformed within_transform(const PanelDataset& data) {
  data.validate();
  const std::size_t t = data.t_len();
  if (t == 0) throw ValidationError("panel: empty calendar");

  WithinTransformed out;
  out.demeaned = data;
  out.unit_means.resize(data.n_units());
  for (std::size_t j = 0; j < data.n_units(); ++j) {
    auto mean_of = [t](const std::vector<double>& col) {
      double s = 0.0;
      for (double v : col) s += v;
      return s / static_cast<double>(t);
    };
    const double m_pi = mean_of(data.pi_core[j]);
    const double m_c = mean_of(data.cinf_lag1[j]);
    const double m_y = mean_of(data.ygap[j]);
    out.unit_means[j] = {m_pi, m_c, m_y};
    for (std::size_t s = 0; s < t; ++s) {
      out.demeaned.pi_core[j][s] -= m_pi;
      out.demeaned.cinf_lag1[j][s] -= m_c;
      out.demeaned.ygap[j][s] -= m_y;
    }
  }
  return out;
}

PanelResult driscoll_kraay(const PanelDataset& data,
                           std::optional<int> bandwidth) {
  data.validate();
  const std::size_t n = data.n_units();
  const std::size_t t = data.t_len();
  if (t < kMinPeriods)
    throw ValidationError("panel: need at least " +
                          std::to_string(kMinPeriods) + " periods per unit");

  const WithinTransformed wt = within_transform(data);

  PanelResult result;
  result.n_units = n;
  result.t_len = t;
  result.bandwidth = bandwidth ? *bandwidth : automatic_bandwidth(t);
  if (result.bandwidth < 0 || result.bandwidth >= static_cast<int>(t))
    throw ValidationError("panel: bandwidth must lie in [0, T)");

  Eigen::Matrix2d xtx = Eigen::Matrix2d::Zero();
  Eigen::Vector2d xty = Eigen::Vector2d::Zero();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t s = 0; s < t; ++s) {
      const Eigen::Vector2d x(wt.demeaned.cinf_lag1[j][s],
                              wt.demeaned.ygap[j][s]);
      xtx += x * x.transpose();
      xty += x * wt.demeaned.pi_core[j][s];
    }
  Eigen::FullPivLU<Eigen::Matrix2d> lu(xtx);
  if (!lu.isInvertible())
    throw NumericalError("panel: rank-deficient within design");
  const Eigen::Vector2d beta = lu.solve(xty);
  result.b_hat = beta(0);
  result.xi_hat = beta(1);

  // Period-wise cross-sectional sums of the scores; their Newey-West
  // long-run covariance is the Driscoll-Kraay filling.
  Eigen::MatrixXd scores(t, 2);
  double ssr = 0.0, sst = 0.0;
  for (std::size_t s = 0; s < t; ++s) {
    Eigen::Vector2d h = Eigen::Vector2d::Zero();
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::Vector2d x(wt.demeaned.cinf_lag1[j][s],
                              wt.demeaned.ygap[j][s]);
      const double e = wt.demeaned.pi_core[j][s] - x.dot(beta);
      h += x * e;
      ssr += e * e;
      sst += wt.demeaned.pi_core[j][s] * wt.demeaned.pi_core[j][s];
    }
    scores.row(s) = h.transpose();
  }
  const Eigen::MatrixXd s_hat = newey_west(scores, result.bandwidth);
  const Eigen::Matrix2d xtx_inv = lu.inverse();
  result.vcov = xtx_inv * (static_cast<double>(t) * s_hat) * xtx_inv;
  result.dk_se = {std::sqrt(result.vcov(0, 0)), std::sqrt(result.vcov(1, 1))};
  result.r2_within = sst > 0.0 ? 1.0 - ssr / sst : 0.0;

  const double n_obs = static_cast<double>(n * t);
  result.crit_95 = t_quantile_975(static_cast<double>(t) - 1.0) *
                   std::sqrt(n_obs / (n_obs - static_cast<double>(n) - 2.0));

  result.fixed_effects.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    result.fixed_effects[j] = wt.unit_means[j][0] -
                              beta(0) * wt.unit_means[j][1] -
                              beta(1) * wt.unit_means[j][2];
  return result;
}

double wald_equality(const PanelResult& result, double external_coef,
                     double external_se) {
  const double var = result.dk_se[0] * result.dk_se[0] +
                     external_se * external_se;
  if (!(std::isfinite(var) && var > 0.0))
    throw ValidationError("wald test: combined variance must be positive");
  const double diff = result.b_hat - external_coef;
  return chi2_1_pvalue(diff * diff / var);
}

PanelDataset simulate_panel(const PanelDgp& dgp, std::size_t n_units,
                            std::size_t t_len, std::uint64_t seed) {
  if (n_units < 1) throw ValidationError("panel dgp: n_units must be >= 1");
  if (t_len < 2) throw ValidationError("panel dgp: t_len must be >= 2");

  PanelDataset data;
  data.countries.reserve(n_units);
  data.periods.reserve(t_len);
  // One extra leading period so the lagged regressor is observable from t=0.
  for (std::size_t s = 0; s < t_len; ++s)
    data.periods.push_back(period_label(s + 1));

  const double share = dgp.common_regressor_share;
  if (!(share >= 0.0 && share < 1.0))
    throw ValidationError("panel dgp: common_regressor_share must be in [0,1)");

  Rng rng_common(seed, 101);
  std::vector<double> common(t_len);
  for (auto& c : common) c = dgp.common_std * rng_common.normal();

  // Shared AR(1) components blended into every unit's regressors.
  std::vector<double> c_shared(t_len + 1), y_shared(t_len);
  {
    Rng rng(seed, 102);
    c_shared[0] = rng.normal() * std::sqrt(dgp.cinf.stationary_var());
    for (std::size_t s = 1; s <= t_len; ++s)
      c_shared[s] =
          dgp.cinf.persistence * c_shared[s - 1] + dgp.cinf.innov_std * rng.normal();
    y_shared[0] = rng.normal() * std::sqrt(dgp.ygap.stationary_var());
    for (std::size_t s = 1; s < t_len; ++s)
      y_shared[s] =
          dgp.ygap.persistence * y_shared[s - 1] + dgp.ygap.innov_std * rng.normal();
  }
  const double w_shared = std::sqrt(share);
  const double w_own = std::sqrt(1.0 - share);

  data.pi_core.resize(n_units);
  data.cinf_lag1.resize(n_units);
  data.ygap.resize(n_units);
  data.cinf_level.resize(n_units);
  for (std::size_t j = 0; j < n_units; ++j) {
    char label[32];
    std::snprintf(label, sizeof(label), "C%02zu", j + 1);
    data.countries.emplace_back(label);

    Rng rng(seed, 1000 + j);
    const double alpha = dgp.alpha_std * rng.normal();
    double c_own = rng.normal() * std::sqrt(dgp.cinf.stationary_var());
    double c_prev = w_shared * c_shared[0] + w_own * c_own;
    double y_own = rng.normal() * std::sqrt(dgp.ygap.stationary_var());
    data.pi_core[j].resize(t_len);
    data.cinf_lag1[j].resize(t_len);
    data.ygap[j].resize(t_len);
    data.cinf_level[j].resize(t_len);
    for (std::size_t s = 0; s < t_len; ++s) {
      c_own = dgp.cinf.persistence * c_own + dgp.cinf.innov_std * rng.normal();
      const double c_now = w_shared * c_shared[s + 1] + w_own * c_own;
      if (s > 0)
        y_own = dgp.ygap.persistence * y_own + dgp.ygap.innov_std * rng.normal();
      const double y_now = w_shared * y_shared[s] + w_own * y_own;
      data.cinf_lag1[j][s] = c_prev;
      data.cinf_level[j][s] = c_now;
      data.ygap[j][s] = y_now;
      data.pi_core[j][s] = alpha + dgp.b * c_prev + dgp.xi * y_now +
                           common[s] + dgp.idio_std * rng.normal();
      c_prev = c_now;
    }
  }
  data.validate();
  return data;
}

}  // namespace icpc
