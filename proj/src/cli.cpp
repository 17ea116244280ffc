#include "icpc/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "icpc/config.hpp"
#include "icpc/csv_io.hpp"
#include "icpc/errors.hpp"
#include "icpc/formulas.hpp"
#include "icpc/reports.hpp"

namespace icpc {

namespace {

namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config file");
  cmd->add_option("--seed", args.seed, "Override the run seed");
  cmd->add_option("--out", args.out_dir, "Override the output directory");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
  ExperimentConfig cfg;
  if (!args.config_path.empty()) {
    cfg = load_config(args.config_path);
  } else {
    cfg.digest = config_digest("");
    cfg.validate();
  }
  if (args.seed) cfg.run.seed = *args.seed;
  if (args.out_dir) cfg.run.out_dir = *args.out_dir;
  return cfg;
}

// Gathers output files and finalizes the manifest after all computation
// succeeded, so failed runs leave no partial outputs behind.
class OutputWriter {
 public:
  OutputWriter(const ExperimentConfig& cfg)
      : dir_(cfg.run.out_dir) {
    manifest_.config_digest = cfg.digest;
    manifest_.seed = cfg.run.seed;
    manifest_.started = manifest_timestamp();
    fs::create_directories(dir_);
  }

  fs::path path(const std::string& name) {
    manifest_.outputs.push_back(name);
    return dir_ / name;
  }

  void write_json(const std::string& name, const nlohmann::json& j) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw ValidationError("cannot write output: " + name);
    out << j.dump(2) << '\n';
  }

  void finish() {
    manifest_.finished = manifest_timestamp();
    write_manifest(dir_ / "manifest.json", manifest_);
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

int cmd_simulate(const CommonArgs& args, bool firm_panel) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto data = simulate_aggregate(cfg.model, cfg.shocks, cfg.run.t_len,
                                       cfg.run.seed);
  std::optional<FirmPanelResult> panel;
  if (firm_panel)
    panel = simulate_firm_panel(cfg.model, cfg.intensity, cfg.shocks,
                                cfg.run.n_firms, cfg.run.t_len, cfg.run.seed);

  OutputWriter out(cfg);
  save_timeseries_csv(out.path("dataset.csv"), data);
  if (panel) {
    save_timeseries_csv(out.path("panel_aggregate.csv"), panel->aggregate);
    std::ofstream prices(out.path("firm_prices.csv"), std::ios::binary);
    prices << "firm,lambda,algorithmic,log_price\n";
    for (std::size_t i = 0; i < panel->final_prices.size(); ++i)
      prices << i << ',' << format_double(panel->lambda[i]) << ','
             << int(panel->algorithmic[i]) << ','
             << format_double(panel->final_prices[i]) << '\n';
  }
  out.finish();
  std::cout << "wrote " << cfg.run.out_dir << "/dataset.csv (" << data.size()
            << " rows)\n";
  return 0;
}

int cmd_estimate(const CommonArgs& args, const std::string& data_path) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto data = load_timeseries_csv(data_path);
  const auto fit = two_step_gmm(data, cfg.estimator.instruments,
                                cfg.model.beta, cfg.estimator.bandwidth);
  OutputWriter out(cfg);
  out.write_json("gmm.json", to_json(fit));
  out.finish();
  std::cout << format_gmm_table(fit);
  return 0;
}

int cmd_panel(const CommonArgs& args, const std::string& data_path) {
  const ExperimentConfig cfg = resolve_config(args);
  PanelDataset data;
  const std::string source =
      !data_path.empty() ? data_path : cfg.panel.data_path;
  if (!source.empty()) {
    data = load_panel_csv(source, cfg.panel.complete_case
                                      ? PanelAlignment::kCompleteCase
                                      : PanelAlignment::kStrict);
  } else {
    data = simulate_panel(cfg.panel.dgp, cfg.panel.n_countries,
                          cfg.panel.t_len, cfg.run.seed);
  }
  auto fit = driscoll_kraay(data, cfg.estimator.bandwidth);
  if (cfg.panel.wald_coef)
    fit.wald_p = wald_equality(fit, *cfg.panel.wald_coef, *cfg.panel.wald_se);

  OutputWriter out(cfg);
  nlohmann::json j = to_json(fit);
  if (fit.wald_p >= 0.0) j["wald_p"] = fit.wald_p;
  if (data.dropped_periods > 0) j["dropped_periods"] = data.dropped_periods;
  out.write_json("panel.json", j);
  out.finish();
  std::cout << format_panel_table(fit, fit.wald_p);
  return 0;
}

int cmd_scaling(const CommonArgs& args) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto result = scaling_experiment(
      cfg.model, cfg.shocks, cfg.estimator.instruments,
      cfg.scaling.lambda_grid, cfg.scaling.t_window,
      cfg.scaling.windows_per_lambda, cfg.run.seed);
  OutputWriter out(cfg);
  out.write_json("scaling.json", to_json(result));
  save_scaling_points_csv(out.path("scaling_points.csv"), result);
  out.finish();
  std::cout << format_scaling_table(result);
  return 0;
}

int cmd_meanfield(const CommonArgs& args) {
  const ExperimentConfig cfg = resolve_config(args);
  // The density dynamics carry no cost-push channel, so the comparison runs
  // with that shock switched off.
  ShockProcessSpec spec = cfg.shocks;
  spec.u.innov_std = 0.0;
  const auto result =
      meanfield_convergence(cfg.model, cfg.intensity, spec,
                            cfg.meanfield.convergence, cfg.run.seed);
  OutputWriter out(cfg);
  out.write_json("meanfield.json", to_json(result));
  save_density_csv(out.path("density.csv"), result.final_density);
  out.finish();
  std::cout << format_convergence_table(result);
  return 0;
}

int cmd_welfare(const CommonArgs& args) {
  const ExperimentConfig cfg = resolve_config(args);
  ShockMoments moments = cfg.shocks.stationary_moments();
  if (cfg.welfare.var_inf) moments.var_inf = *cfg.welfare.var_inf;
  if (cfg.welfare.var_ygap) moments.var_ygap = *cfg.welfare.var_ygap;
  if (cfg.welfare.var_u) moments.var_u = *cfg.welfare.var_u;

  const auto welfare = welfare_decomposition(cfg.model, moments,
                                             cfg.welfare.w_cl, cfg.welfare.w_ai);
  PolicyReport policy;
  policy.psi_inf_star = taylor_coefficient(cfg.model);
  policy.pi_target =
      optimal_inflation_target(cfg.model, cfg.welfare.expected_cinf);
  policy.eta_inf_bound =
      variance_share_bound(equilibrium_slopes(cfg.model), moments);
  const double lucas = lucas_welfare_cost(cfg.model, moments.var_inf);

  nlohmann::json j = welfare_to_json(cfg.model, welfare, policy, lucas);
  std::string extra;
  if (cfg.welfare.eta_bar) {
    const double cutoff =
        indexing_cutoff(cfg.model, moments, *cfg.welfare.eta_bar);
    j["indexing_cutoff"] = cutoff;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "  indexing_cutoff        %.6f\n", cutoff);
    extra = buf;
  }

  OutputWriter out(cfg);
  out.write_json("welfare.json", j);
  out.finish();
  std::cout << format_welfare_table(cfg.model, welfare, policy, lucas) << extra;
  return 0;
}

int cmd_montecarlo(const CommonArgs& args) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto study =
      consistency_study(cfg.model, cfg.shocks, cfg.estimator.instruments,
                        cfg.run.t_grid, cfg.run.replications, cfg.run.seed);
  OutputWriter out(cfg);
  out.write_json("montecarlo.json", to_json(study));
  out.finish();
  std::cout << format_consistency_table(study);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "Simulation and estimation toolkit for the inference-cost Phillips "
      "curve"};
  app.require_subcommand(1);

  CommonArgs args;
  bool firm_panel = false;
  std::string data_path;

  auto* simulate =
      app.add_subcommand("simulate", "Generate a synthetic aggregate dataset");
  add_common(simulate, args);
  simulate->add_flag("--firm-panel", firm_panel,
                     "Also run the firm panel and write its outputs");

  auto* estimate =
      app.add_subcommand("estimate", "Two-step estimation on a dataset CSV");
  add_common(estimate, args);
  estimate->add_option("--data", data_path, "Input dataset CSV")->required();

  auto* panel = app.add_subcommand(
      "panel", "Fixed-effects panel estimation (CSV or synthetic)");
  add_common(panel, args);
  panel->add_option("--data", data_path, "Input panel CSV (long format)");

  auto* scaling =
      app.add_subcommand("scaling", "Log-log pass-through scaling experiment");
  add_common(scaling, args);

  auto* meanfield = app.add_subcommand(
      "meanfield", "Density-limit convergence study and density export");
  add_common(meanfield, args);

  auto* welfare =
      app.add_subcommand("welfare", "Closed-form welfare and policy report");
  add_common(welfare, args);

  auto* montecarlo =
      app.add_subcommand("montecarlo", "Estimator consistency study");
  add_common(montecarlo, args);

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return cmd_simulate(args, firm_panel);
    if (estimate->parsed()) return cmd_estimate(args, data_path);
    if (panel->parsed()) return cmd_panel(args, data_path);
    if (scaling->parsed()) return cmd_scaling(args);
    if (meanfield->parsed()) return cmd_meanfield(args);
    if (welfare->parsed()) return cmd_welfare(args);
    if (montecarlo->parsed()) return cmd_montecarlo(args);
    return 1;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      std::cout << app.help();
      return 0;
    }
    std::cerr << "icpctool: usage: " << e.what() << '\n' << app.help();
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "icpctool: validation: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "icpctool: runtime: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "icpctool: runtime: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace icpc
