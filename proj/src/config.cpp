#include "icpc/config.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "icpc/errors.hpp"

namespace icpc {

namespace {

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

SectionMap parse_sections(const std::string& text) {
  SectionMap sections;
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("config line " + std::to_string(line_no) +
                              ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": key outside any [section]");
    if (!sections[section].emplace(key, value).second)
      throw ValidationError("config: duplicate key " + section + "." + key);
  }
  return sections;
}

double to_double(const std::string& v, const std::string& where) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ValidationError("config: non-numeric value for " + where);
  return out;
}

std::uint64_t to_u64(const std::string& v, const std::string& where) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ValidationError("config: non-integer value for " + where);
  return out;
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ValidationError("config: expected true/false for " + where);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : v) {
    if (ch == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

// Pulls typed values out of one section while tracking which keys the
// schema consumed, so leftovers can be rejected by name.
class Section {
 public:
  Section(const SectionMap& all, const std::string& name) : name_(name) {
    const auto it = all.find(name);
    if (it != all.end()) entries_ = &it->second;
  }

  bool has(const std::string& key) const {
    return entries_ && entries_->count(key) > 0;
  }

  std::string raw(const std::string& key) const {
    seen_.insert(key);
    return entries_->at(key);
  }

  void get(const std::string& key, double& out) {
    if (has(key)) out = to_double(raw(key), name_ + "." + key);
  }
  void get(const std::string& key, std::uint64_t& out) {
    if (has(key)) out = to_u64(raw(key), name_ + "." + key);
  }
  void get(const std::string& key, int& out) {
    if (has(key)) out = static_cast<int>(to_u64(raw(key), name_ + "." + key));
  }
  void get(const std::string& key, bool& out) {
    if (has(key)) out = to_bool(raw(key), name_ + "." + key);
  }
  void get(const std::string& key, std::string& out) {
    if (has(key)) out = raw(key);
  }
  void get(const std::string& key, std::optional<double>& out) {
    if (has(key)) out = to_double(raw(key), name_ + "." + key);
  }
  void get_list(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    out.clear();
    for (const auto& p : split_list(raw(key)))
      out.push_back(to_double(p, name_ + "." + key));
  }
  void get_list(const std::string& key, std::vector<std::size_t>& out) {
    if (!has(key)) return;
    out.clear();
    for (const auto& p : split_list(raw(key)))
      out.push_back(static_cast<std::size_t>(to_u64(p, name_ + "." + key)));
  }

  void reject_unknown() const {
    if (!entries_) return;
    for (const auto& [key, value] : *entries_)
      if (!seen_.count(key))
        throw ValidationError("config: unknown key " + name_ + "." + key);
  }

 private:
  std::string name_;
  const std::map<std::string, std::string>* entries_ = nullptr;
  mutable std::set<std::string> seen_;
};

IntensityDistribution parse_intensity(Section& sec, double fallback_mean) {
  std::string kind = "point_mass";
  sec.get("kind", kind);
  if (kind == "point_mass") {
    double value = fallback_mean;
    sec.get("value", value);
    return IntensityDistribution::point_mass(value);
  }
  if (kind == "uniform") {
    double lo = 0.0, hi = 1.0;
    sec.get("lo", lo);
    sec.get("hi", hi);
    return IntensityDistribution::uniform(lo, hi);
  }
  if (kind == "two_point") {
    double lo = 0.0, hi = 1.0, w = 0.5;
    sec.get("lo", lo);
    sec.get("hi", hi);
    sec.get("weight_hi", w);
    return IntensityDistribution::two_point(lo, hi, w);
  }
  if (kind == "truncated_beta") {
    double alpha = 2.0, beta = 2.0, lo = 0.0, hi = 1.0;
    sec.get("alpha", alpha);
    sec.get("beta", beta);
    sec.get("lo", lo);
    sec.get("hi", hi);
    return IntensityDistribution::truncated_beta(alpha, beta, lo, hi);
  }
  throw ValidationError("config: unknown intensity.kind " + kind);
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&tt, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

std::string config_digest(const std::string& text) {
  const SectionMap sections = parse_sections(text);
  std::vector<std::string> lines;
  for (const auto& [section, entries] : sections)
    for (const auto& [key, value] : entries)
      lines.push_back(section + "." + key + "=" + value);
  std::sort(lines.begin(), lines.end());
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  };
  for (const auto& line : lines) {
    for (char c : line) mix(c);
    mix('\n');
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config_text(const std::string& text) {
  const SectionMap sections = parse_sections(text);
  static const std::set<std::string> known_sections{
      "model", "shocks",    "estimator", "run",    "intensity",
      "scaling", "meanfield", "panel",     "welfare"};
  for (const auto& [name, entries] : sections)
    if (!known_sections.count(name))
      throw ValidationError("config: unknown section [" + name + "]");

  ExperimentConfig cfg;

  Section model(sections, "model");
  model.get("theta", cfg.model.theta);
  model.get("beta", cfg.model.beta);
  model.get("lambda_bar", cfg.model.lambda_bar);
  model.get("phi", cfg.model.phi);
  model.get("rho", cfg.model.rho);
  model.get("omega", cfg.model.omega);
  model.get("gamma", cfg.model.gamma);
  model.reject_unknown();

  Section shocks(sections, "shocks");
  shocks.get("ygap_rho", cfg.shocks.ygap.persistence);
  shocks.get("ygap_std", cfg.shocks.ygap.innov_std);
  shocks.get("cinf_rho", cfg.shocks.cinf.persistence);
  shocks.get("cinf_std", cfg.shocks.cinf.innov_std);
  shocks.get("u_rho", cfg.shocks.u.persistence);
  shocks.get("u_std", cfg.shocks.u.innov_std);
  shocks.get("expectation_noise_std", cfg.shocks.expectation_noise_std);
  shocks.reject_unknown();

  Section estimator(sections, "estimator");
  estimator.get("pi_lags", cfg.estimator.instruments.pi_lags);
  estimator.get("ygap_lags", cfg.estimator.instruments.ygap_lags);
  estimator.get("cinf_lags", cfg.estimator.instruments.cinf_lags);
  estimator.get("constant", cfg.estimator.instruments.constant);
  if (estimator.has("bandwidth")) {
    const std::string bw = estimator.raw("bandwidth");
    if (bw != "auto")
      cfg.estimator.bandwidth = static_cast<int>(to_u64(bw, "estimator.bandwidth"));
  }
  estimator.reject_unknown();

  Section run(sections, "run");
  run.get("seed", cfg.run.seed);
  run.get("t_len", cfg.run.t_len);
  run.get("n_firms", cfg.run.n_firms);
  run.get("replications", cfg.run.replications);
  run.get_list("t_grid", cfg.run.t_grid);
  run.get("out_dir", cfg.run.out_dir);
  run.reject_unknown();

  Section intensity(sections, "intensity");
  cfg.intensity = parse_intensity(intensity, cfg.model.lambda_bar);
  intensity.reject_unknown();

  Section scaling(sections, "scaling");
  scaling.get_list("lambda_grid", cfg.scaling.lambda_grid);
  scaling.get("t_window", cfg.scaling.t_window);
  scaling.get("windows_per_lambda", cfg.scaling.windows_per_lambda);
  scaling.reject_unknown();

  Section meanfield(sections, "meanfield");
  meanfield.get_list("n_grid", cfg.meanfield.convergence.n_grid);
  meanfield.get("burn_in", cfg.meanfield.convergence.burn_in);
  meanfield.get("t_eval", cfg.meanfield.convergence.t_eval);
  meanfield.get("reps", cfg.meanfield.convergence.reps);
  meanfield.get("grid_cells", cfg.meanfield.convergence.grid_cells);
  meanfield.get("n_calibration", cfg.meanfield.convergence.n_calibration);
  meanfield.get("reset_noise_std", cfg.meanfield.convergence.reset_noise_std);
  meanfield.reject_unknown();

  Section panel(sections, "panel");
  panel.get("n_countries", cfg.panel.n_countries);
  panel.get("t_len", cfg.panel.t_len);
  panel.get("b", cfg.panel.dgp.b);
  panel.get("xi", cfg.panel.dgp.xi);
  panel.get("alpha_std", cfg.panel.dgp.alpha_std);
  panel.get("idio_std", cfg.panel.dgp.idio_std);
  panel.get("common_std", cfg.panel.dgp.common_std);
  panel.get("common_regressor_share", cfg.panel.dgp.common_regressor_share);
  panel.get("cinf_rho", cfg.panel.dgp.cinf.persistence);
  panel.get("cinf_std", cfg.panel.dgp.cinf.innov_std);
  panel.get("ygap_rho", cfg.panel.dgp.ygap.persistence);
  panel.get("ygap_std", cfg.panel.dgp.ygap.innov_std);
  panel.get("data", cfg.panel.data_path);
  panel.get("complete_case", cfg.panel.complete_case);
  panel.get("wald_coef", cfg.panel.wald_coef);
  panel.get("wald_se", cfg.panel.wald_se);
  panel.reject_unknown();

  Section welfare(sections, "welfare");
  welfare.get("w_cl", cfg.welfare.w_cl);
  welfare.get("w_ai", cfg.welfare.w_ai);
  welfare.get("expected_cinf", cfg.welfare.expected_cinf);
  welfare.get("eta_bar", cfg.welfare.eta_bar);
  welfare.get("var_inf", cfg.welfare.var_inf);
  welfare.get("var_ygap", cfg.welfare.var_ygap);
  welfare.get("var_u", cfg.welfare.var_u);
  welfare.reject_unknown();

  cfg.digest = config_digest(text);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void ExperimentConfig::validate() const {
  model.validate();
  shocks.validate();
  estimator.instruments.validate();
  intensity.validate();
  if (std::abs(intensity.mean() - model.lambda_bar) > 1e-8)
    throw ValidationError(
        "config: intensity distribution mean must equal model.lambda_bar");
  if (run.t_len < 2) throw ValidationError("config: run.t_len must be >= 2");
  if (run.replications < 1)
    throw ValidationError("config: run.replications must be >= 1");
  if (panel.wald_coef.has_value() != panel.wald_se.has_value())
    throw ValidationError(
        "config: panel.wald_coef and panel.wald_se must be set together");
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::json j;
  j["config_digest"] = m.config_digest;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["outputs"] = m.outputs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write manifest: " + path.string());
  out << j.dump(2) << '\n';
}

std::string manifest_timestamp() { return timestamp_now(); }

}  // namespace icpc
