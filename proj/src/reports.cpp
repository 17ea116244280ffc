#include "icpc/reports.hpp"

#include <cstdio>
#include <sstream>

#include "icpc/formulas.hpp"

namespace icpc {

namespace {

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

void row(std::ostringstream& out, const std::string& name,
         const std::string& value, const std::string& extra = "") {
  out << "  " << name;
  for (std::size_t i = name.size(); i < 24; ++i) out << ' ';
  out << value;
  if (!extra.empty()) out << "  " << extra;
  out << '\n';
}

}  // namespace

std::string format_welfare_table(const ModelParams& params,
                                 const WelfareReport& welfare,
                                 const PolicyReport& policy,
                                 double lucas_cost) {
  const SlopePair base = closed_form_slopes(params);
  const SlopePair alg = algorithmic_slopes(params, base);
  std::ostringstream out;
  out << "Model-implied quantities\n";
  row(out, "kappa", fixed6(base.kappa));
  row(out, "kappa_inf", fixed6(base.kappa_inf));
  row(out, "kappa_alg", fixed6(alg.kappa));
  row(out, "kappa_inf_alg", fixed6(alg.kappa_inf));
  row(out, "phi_rho", fixed6(params.phi_rho()));
  out << "Welfare decomposition\n";
  row(out, "w_cl", fixed6(welfare.w_cl));
  row(out, "w_ai", fixed6(welfare.w_ai));
  row(out, "l_inf", fixed6(welfare.l_inf));
  row(out, "l_alg", fixed6(welfare.l_alg));
  row(out, "w_star", fixed6(welfare.w_star));
  out << "Policy\n";
  row(out, "psi_inf_star", fixed6(policy.psi_inf_star));
  row(out, "pi_target", fixed6(policy.pi_target));
  row(out, "eta_inf_bound", fixed6(policy.eta_inf_bound));
  row(out, "lucas_cost", fixed6(lucas_cost));
  return out.str();
}

std::string format_gmm_table(const GmmResult& r) {
  std::ostringstream out;
  out << "Two-step estimates\n";
  row(out, "kappa_hat", fixed6(r.kappa_hat), "se " + fixed6(r.hac_se[0]));
  row(out, "kappa_inf_hat", fixed6(r.kappa_inf_hat),
      "se " + fixed6(r.hac_se[1]));
  row(out, "j_stat", fixed6(r.j_stat),
      "dof " + std::to_string(r.j_dof));
  row(out, "bandwidth", std::to_string(r.bandwidth));
  row(out, "t_eff", std::to_string(r.t_eff));
  if (r.ridge_used) row(out, "ridge_used", "true");
  return out.str();
}

std::string format_panel_table(const PanelResult& r, double wald_p) {
  std::ostringstream out;
  out << "Within-group estimates\n";
  row(out, "b_hat", fixed6(r.b_hat), "se " + fixed6(r.dk_se[0]));
  row(out, "xi_hat", fixed6(r.xi_hat), "se " + fixed6(r.dk_se[1]));
  row(out, "r2_within", fixed6(r.r2_within));
  row(out, "sample",
      std::to_string(r.t_len) + " x " + std::to_string(r.n_units));
  row(out, "bandwidth", std::to_string(r.bandwidth));
  if (wald_p >= 0.0) row(out, "wald_p", fixed6(wald_p));
  return out.str();
}

std::string format_scaling_table(const ScalingResult& r) {
  std::ostringstream out;
  out << "Scaling regression\n";
  row(out, "a_hat", fixed6(r.a_hat),
      "se " + fixed6(r.se_a) + "  hac " + fixed6(r.se_a_hac));
  row(out, "b_hat", fixed6(r.b_hat),
      "se " + fixed6(r.se_b) + "  hac " + fixed6(r.se_b_hac));
  row(out, "r2", fixed6(r.r2));
  row(out, "windows", std::to_string(r.n_windows));
  if (r.n_failed > 0) row(out, "failed_windows", std::to_string(r.n_failed));
  return out.str();
}

std::string format_convergence_table(const ConvergenceResult& r) {
  std::ostringstream out;
  out << "Mean-field convergence (median W1 by panel size)\n";
  for (std::size_t i = 0; i < r.n_grid.size(); ++i)
    row(out, "N = " + std::to_string(r.n_grid[i]), fixed6(r.median_w1[i]));
  row(out, "sigma_p2", fixed6(r.sigma_p2));
  return out.str();
}

std::string format_consistency_table(const ConsistencyStudy& s) {
  std::ostringstream out;
  out << "Monte Carlo RMSE by sample size\n";
  for (const auto& rw : s.rows) {
    row(out, "T = " + std::to_string(rw.t_len),
        "rmse_k " + fixed6(rw.rmse_kappa) + "  rmse_ki " +
            fixed6(rw.rmse_kappa_inf),
        "cover " + fixed6(rw.coverage_kappa) + "/" +
            fixed6(rw.coverage_kappa_inf));
  }
  row(out, "log-log slope kappa", fixed6(s.slope_kappa));
  row(out, "log-log slope kappa_inf", fixed6(s.slope_kappa_inf));
  return out.str();
}

nlohmann::json to_json(const GmmResult& r) {
  return {
      {"kappa_hat", r.kappa_hat},
      {"kappa_inf_hat", r.kappa_inf_hat},
      {"hac_se", {r.hac_se[0], r.hac_se[1]}},
      {"vcov",
       {{r.vcov(0, 0), r.vcov(0, 1)}, {r.vcov(1, 0), r.vcov(1, 1)}}},
      {"j_stat", r.j_stat},
      {"j_dof", r.j_dof},
      {"first_step", {{"kappa_hat", r.kappa_first},
                      {"kappa_inf_hat", r.kappa_inf_first}}},
      {"bandwidth", r.bandwidth},
      {"t_eff", r.t_eff},
      {"ridge_used", r.ridge_used},
  };
}

nlohmann::json to_json(const PanelResult& r) {
  return {
      {"b_hat", r.b_hat},
      {"xi_hat", r.xi_hat},
      {"dk_se", {r.dk_se[0], r.dk_se[1]}},
      {"vcov",
       {{r.vcov(0, 0), r.vcov(0, 1)}, {r.vcov(1, 0), r.vcov(1, 1)}}},
      {"r2_within", r.r2_within},
      {"fixed_effects", r.fixed_effects},
      {"bandwidth", r.bandwidth},
      {"n_units", r.n_units},
      {"t_len", r.t_len},
      {"crit_95", r.crit_95},
  };
}

nlohmann::json to_json(const ScalingResult& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& [lam, ki] : r.points)
    points.push_back({{"lambda_bar", lam}, {"kappa_inf_hat", ki}});
  return {
      {"a_hat", r.a_hat},       {"b_hat", r.b_hat},
      {"r2", r.r2},             {"se_a", r.se_a},
      {"se_b", r.se_b},         {"se_a_hac", r.se_a_hac},
      {"se_b_hac", r.se_b_hac}, {"n_windows", r.n_windows},
      {"n_failed", r.n_failed}, {"points", points},
  };
}

nlohmann::json to_json(const ConvergenceResult& r) {
  return {
      {"n_grid", r.n_grid},
      {"median_w1", r.median_w1},
      {"w1", r.w1},
      {"sigma_p2", r.sigma_p2},
  };
}

nlohmann::json to_json(const ConsistencyStudy& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& rw : s.rows)
    rows.push_back({{"t_len", rw.t_len},
                    {"reps", rw.reps},
                    {"rmse_kappa", rw.rmse_kappa},
                    {"rmse_kappa_inf", rw.rmse_kappa_inf},
                    {"coverage_kappa", rw.coverage_kappa},
                    {"coverage_kappa_inf", rw.coverage_kappa_inf}});
  return {
      {"rows", rows},
      {"slope_kappa", s.slope_kappa},
      {"slope_kappa_inf", s.slope_kappa_inf},
      {"truth", {{"kappa", s.truth.kappa}, {"kappa_inf", s.truth.kappa_inf}}},
  };
}

nlohmann::json welfare_to_json(const ModelParams& params,
                               const WelfareReport& welfare,
                               const PolicyReport& policy, double lucas_cost) {
  const SlopePair base = closed_form_slopes(params);
  const SlopePair alg = algorithmic_slopes(params, base);
  return {
      {"kappa", base.kappa},
      {"kappa_inf", base.kappa_inf},
      {"kappa_alg", alg.kappa},
      {"kappa_inf_alg", alg.kappa_inf},
      {"phi_rho", params.phi_rho()},
      {"welfare",
       {{"w_cl", welfare.w_cl},
        {"w_ai", welfare.w_ai},
        {"l_inf", welfare.l_inf},
        {"l_alg", welfare.l_alg},
        {"w_star", welfare.w_star}}},
      {"policy",
       {{"psi_inf_star", policy.psi_inf_star},
        {"pi_target", policy.pi_target},
        {"eta_inf_bound", policy.eta_inf_bound}}},
      {"lucas_cost", lucas_cost},
  };
}

}  // namespace icpc
