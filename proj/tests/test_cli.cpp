#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "icpc/cli.hpp"
#include "icpc/formulas.hpp"
#include "icpc/reports.hpp"
#include "icpc/rng.hpp"

using namespace icpc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("icpc_cli_" + std::to_string(Rng(::time(nullptr), 17).next_u64() % 1000000));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"icpctool"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("usage and unknown commands exit 1") {
  CHECK(run({}) == 1);
  CHECK(run({"frobnicate"}) == 1);
  CHECK(run({"estimate"}) == 1);  // missing required --data
}

TEST_CASE("simulate then estimate round trip") {
  TempDir dir;
  const auto sim_out = (dir.path / "sim").string();
  const auto cfg = dir.path / "exp.cfg";
  write_file(cfg,
             "[shocks]\n"
             "u_rho = 0.0\n"
             "u_std = 0.3\n"
             "[run]\n"
             "t_len = 2000\n");
  CHECK(run({"simulate", "--config", cfg.string(), "--seed", "11", "--out",
             sim_out}) == 0);
  CHECK(fs::exists(dir.path / "sim" / "dataset.csv"));
  CHECK(fs::exists(dir.path / "sim" / "manifest.json"));

  const auto est_out = (dir.path / "est").string();
  CHECK(run({"estimate", "--config", cfg.string(), "--data",
             (dir.path / "sim" / "dataset.csv").string(), "--out",
             est_out}) == 0);
  const auto j =
      nlohmann::json::parse(read_file(dir.path / "est" / "gmm.json"));
  CHECK(j.contains("kappa_hat"));
  CHECK(j.contains("kappa_inf_hat"));
  CHECK(j.contains("hac_se"));
  CHECK(j.contains("j_stat"));
  // estimates land near the calibrated slopes
  CHECK(std::abs(j["kappa_hat"].get<double>() - 0.078936) < 0.02);
  CHECK(std::abs(j["kappa_inf_hat"].get<double>() - 0.0161515) < 0.01);
}

TEST_CASE("reruns with one seed reproduce outputs byte for byte") {
  TempDir dir;
  const auto out_a = (dir.path / "a").string();
  const auto out_b = (dir.path / "b").string();
  CHECK(run({"simulate", "--seed", "321", "--out", out_a}) == 0);
  CHECK(run({"simulate", "--seed", "321", "--out", out_b}) == 0);
  CHECK(read_file(dir.path / "a" / "dataset.csv") ==
        read_file(dir.path / "b" / "dataset.csv"));
  CHECK(run({"welfare", "--out", out_a}) == 0);
  CHECK(run({"welfare", "--out", out_b}) == 0);
  CHECK(read_file(dir.path / "a" / "welfare.json") ==
        read_file(dir.path / "b" / "welfare.json"));
}

TEST_CASE("welfare table prints the calibrated values at six decimals") {
  const ModelParams params;
  const auto welfare =
      welfare_decomposition(params, ShockMoments{1.0, 1.0, 1.0});
  PolicyReport policy;
  policy.psi_inf_star = taylor_coefficient(params);
  const auto table = format_welfare_table(params, welfare, policy, 0.0);
  CHECK(table.find("0.084333") != std::string::npos);
  CHECK(table.find("0.015180") != std::string::npos);
  CHECK(table.find("0.016152") != std::string::npos);
}

TEST_CASE("welfare report carries the closed-form quantities") {
  TempDir dir;
  const auto out = (dir.path / "w").string();
  CHECK(run({"welfare", "--out", out}) == 0);
  const auto j =
      nlohmann::json::parse(read_file(dir.path / "w" / "welfare.json"));
  CHECK(j["kappa"].get<double>() == doctest::Approx(0.0843333333).epsilon(1e-9));
  CHECK(j["kappa_inf"].get<double>() == doctest::Approx(0.01518).epsilon(1e-12));
  CHECK(j["policy"]["psi_inf_star"].get<double>() ==
        doctest::Approx(0.01615152).epsilon(1e-12));
  CHECK(j["phi_rho"].get<double>() == doctest::Approx(0.064).epsilon(1e-15));
}

TEST_CASE("panel subcommand runs on synthetic and CSV data") {
  TempDir dir;
  const auto out = (dir.path / "p").string();
  const auto cfg = dir.path / "exp.cfg";
  write_file(cfg,
             "[panel]\n"
             "n_countries = 5\n"
             "t_len = 40\n"
             "wald_coef = 0.087\n"
             "wald_se = 0.021\n");
  CHECK(run({"panel", "--config", cfg.string(), "--seed", "5", "--out", out}) ==
        0);
  const auto j = nlohmann::json::parse(read_file(dir.path / "p" / "panel.json"));
  CHECK(j.contains("b_hat"));
  CHECK(j.contains("dk_se"));
  CHECK(j.contains("r2_within"));
  CHECK(j.contains("wald_p"));
  CHECK(j["n_units"].get<int>() == 5);
}

TEST_CASE("validation failures leave no partial data outputs") {
  TempDir dir;
  const auto cfg = dir.path / "bad.cfg";
  write_file(cfg, "[model]\ntheta = 2.0\n");
  const auto out = (dir.path / "never").string();
  CHECK(run({"simulate", "--config", cfg.string(), "--out", out}) == 1);
  CHECK_FALSE(fs::exists(dir.path / "never"));
}

TEST_CASE("config errors exit 1, numerical errors exit 2") {
  TempDir dir;
  write_file(dir.path / "estimable.csv",
             "period,pi,pi_e,ygap,cinf\n"
             "t1,1,2,3,4\n"
             "t2,1,2,3,4\n");
  // far too short for estimation -> validation error
  CHECK(run({"estimate", "--data", (dir.path / "estimable.csv").string(),
             "--out", (dir.path / "e").string()}) == 1);

  // long enough but perfectly collinear -> numerical rank error
  std::string rows = "period,pi,pi_e,ygap,cinf\n";
  Rng rng(4);
  for (int t = 0; t < 120; ++t) {
    char buf[128];
    const double y = rng.normal();
    std::snprintf(buf, sizeof(buf), "t%03d,%f,0,%f,%f\n", t, rng.normal(), y,
                  y);
    rows += buf;
  }
  write_file(dir.path / "collinear.csv", rows);
  CHECK(run({"estimate", "--data", (dir.path / "collinear.csv").string(),
             "--out", (dir.path / "e2").string()}) == 2);
}

TEST_CASE("montecarlo subcommand emits the study table") {
  TempDir dir;
  const auto cfg = dir.path / "mc.cfg";
  write_file(cfg,
             "[shocks]\n"
             "u_rho = 0.0\n"
             "[run]\n"
             "t_grid = 300, 900\n"
             "replications = 6\n");
  const auto out = (dir.path / "mc").string();
  CHECK(run({"montecarlo", "--config", cfg.string(), "--out", out}) == 0);
  const auto j =
      nlohmann::json::parse(read_file(dir.path / "mc" / "montecarlo.json"));
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["rmse_kappa"].get<double>() > 0.0);
}
