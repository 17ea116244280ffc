#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "icpc/gmm.hpp"
#include "icpc/meanfield.hpp"
#include "icpc/model.hpp"
#include "icpc/panel.hpp"
#include "icpc/simulation.hpp"

namespace icpc {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct EstimatorBlock {
  InstrumentSpec instruments;
  std::optional<int> bandwidth;  // empty = automatic rule
};

struct RunBlock {
  std::uint64_t seed = 42;
  std::size_t t_len = 5000;
  std::size_t n_firms = 1000;
  std::size_t replications = 20;
  std::vector<std::size_t> t_grid{500, 2000, 8000};
  std::string out_dir = "out";
};

struct ScalingBlock {
  std::vector<double> lambda_grid{0.06, 0.12, 0.18, 0.24, 0.30};
  std::size_t t_window = 2000;
  std::size_t windows_per_lambda = 10;
};

struct MeanfieldBlock {
  ConvergenceConfig convergence;
};

struct PanelBlock {
  PanelDgp dgp;
  std::size_t n_countries = 7;
  std::size_t t_len = 52;
  std::string data_path;  // when set, estimate from this CSV
  bool complete_case = false;
  std::optional<double> wald_coef;
  std::optional<double> wald_se;
};

struct WelfareBlock {
  double w_cl = 0.0;
  double w_ai = 0.0;
  double expected_cinf = 0.0;
  std::optional<double> eta_bar;
  // Overrides; by default the shock-block stationary variances are used.
  std::optional<double> var_inf;
  std::optional<double> var_ygap;
  std::optional<double> var_u;
};

// Whole-experiment configuration parsed from the flat sectioned key-value
// text format. Unknown sections or keys are rejected.
struct ExperimentConfig {
  ModelParams model;
  ShockProcessSpec shocks;
  EstimatorBlock estimator;
  RunBlock run;
  IntensityDistribution intensity = IntensityDistribution::point_mass(0.18);
  ScalingBlock scaling;
  MeanfieldBlock meanfield;
  PanelBlock panel;
  WelfareBlock welfare;
  std::string digest;  // canonical content hash of the parsed text

  // Validates every referenced block before any run starts.
  void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// FNV-1a hash of the sorted canonical section.key=value lines; invariant to
// key and section reordering, comments and whitespace.
std::string config_digest(const std::string& text);

struct RunManifest {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string version = kToolkitVersion;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& m);

// Current UTC time as an ISO-8601 string.
std::string manifest_timestamp();

}  // namespace icpc
