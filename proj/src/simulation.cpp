#include "icpc/simulation.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numeric>

#include "icpc/errors.hpp"
#include "icpc/formulas.hpp"

namespace icpc {

namespace {

// Stream ids so that sub-generators of one seed stay independent.
enum Stream : std::uint64_t {
  kStreamYgap = 1,
  kStreamCinf = 2,
  kStreamU = 3,
  kStreamExpectationNoise = 4,
  kStreamIntensity = 5,
  kStreamFirmBase = 1000,
};

// Disjoint tag ranges for the counter-hashed per-firm draws.
constexpr std::uint64_t kTagShift = 1ULL << 40;
constexpr std::uint64_t kTagCalvo = 1;
constexpr std::uint64_t kTagNoiseA = 2;
constexpr std::uint64_t kTagNoiseB = 3;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

std::vector<double> ar1_path(const Ar1Spec& spec, std::size_t t_len, Rng& rng) {
  std::vector<double> x(t_len);
  if (t_len == 0) return x;
  // Start at the stationary distribution so no burn-in is needed.
  x[0] = rng.normal() * std::sqrt(spec.stationary_var());
  for (std::size_t t = 1; t < t_len; ++t)
    x[t] = spec.persistence * x[t - 1] + spec.innov_std * rng.normal();
  return x;
}

}  // namespace

IntensityDistribution IntensityDistribution::point_mass(double value) {
  IntensityDistribution d;
  d.kind_ = Kind::kPointMass;
  d.a_ = value;
  d.validate();
  return d;
}

IntensityDistribution IntensityDistribution::uniform(double lo, double hi) {
  IntensityDistribution d;
  d.kind_ = Kind::kUniform;
  d.a_ = lo;
  d.b_ = hi;
  d.validate();
  return d;
}

IntensityDistribution IntensityDistribution::two_point(double lo_value,
                                                       double hi_value,
                                                       double w_hi) {
  IntensityDistribution d;
  d.kind_ = Kind::kTwoPoint;
  d.a_ = lo_value;
  d.b_ = hi_value;
  d.w_ = w_hi;
  d.validate();
  return d;
}

IntensityDistribution IntensityDistribution::truncated_beta(double alpha,
                                                            double beta,
                                                            double lo,
                                                            double hi) {
  IntensityDistribution d;
  d.kind_ = Kind::kTruncatedBeta;
  d.a_ = alpha;
  d.b_ = beta;
  d.lo_ = lo;
  d.hi_ = hi;
  d.validate();
  return d;
}

void IntensityDistribution::validate() const {
  auto in_unit = [](double x) {
    return std::isfinite(x) && x >= 0.0 && x <= 1.0;
  };
  switch (kind_) {
    case Kind::kPointMass:
      require(in_unit(a_), "invalid distribution: point mass outside [0,1]");
      break;
    case Kind::kUniform:
      require(in_unit(a_) && in_unit(b_) && a_ <= b_,
              "invalid distribution: uniform support must satisfy "
              "0 <= lo <= hi <= 1");
      break;
    case Kind::kTwoPoint:
      require(in_unit(a_) && in_unit(b_),
              "invalid distribution: two-point values outside [0,1]");
      require(std::isfinite(w_) && w_ >= 0.0 && w_ <= 1.0,
              "invalid distribution: two-point weight outside [0,1]");
      break;
    case Kind::kTruncatedBeta:
      require(std::isfinite(a_) && a_ > 0.0 && std::isfinite(b_) && b_ > 0.0,
              "invalid distribution: beta shape parameters must be > 0");
      require(in_unit(lo_) && in_unit(hi_) && lo_ < hi_,
              "invalid distribution: truncation bounds must satisfy "
              "0 <= lo < hi <= 1");
      break;
  }
}

double IntensityDistribution::mean() const {
  switch (kind_) {
    case Kind::kPointMass:
      return a_;
    case Kind::kUniform:
      return 0.5 * (a_ + b_);
    case Kind::kTwoPoint:
      return (1.0 - w_) * a_ + w_ * b_;
    case Kind::kTruncatedBeta: {
      // E[X | lo < X < hi] for X ~ Beta(a,b), via regularized incomplete
      // beta: mean * (I_hi(a+1,b) - I_lo(a+1,b)) / (I_hi(a,b) - I_lo(a,b)).
      const double mass = boost::math::ibeta(a_, b_, hi_) -
                          boost::math::ibeta(a_, b_, lo_);
      const double tilted = boost::math::ibeta(a_ + 1.0, b_, hi_) -
                            boost::math::ibeta(a_ + 1.0, b_, lo_);
      return a_ / (a_ + b_) * tilted / mass;
    }
  }
  return 0.0;
}

double IntensityDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::kPointMass:
      return a_;
    case Kind::kUniform:
      return rng.uniform(a_, b_);
    case Kind::kTwoPoint:
      return rng.bernoulli(w_) ? b_ : a_;
    case Kind::kTruncatedBeta: {
      // Inverse-CDF restricted to the truncation interval.
      const double c_lo = boost::math::ibeta(a_, b_, lo_);
      const double c_hi = boost::math::ibeta(a_, b_, hi_);
      const double u = c_lo + (c_hi - c_lo) * rng.uniform01();
      return std::clamp(boost::math::ibeta_inv(a_, b_, u), lo_, hi_);
    }
  }
  return 0.0;
}

void ShockProcessSpec::validate() const {
  auto check = [](const Ar1Spec& s, const char* name) {
    if (!(std::isfinite(s.persistence) && std::abs(s.persistence) < 1.0))
      throw ValidationError(std::string("invalid shock spec: ") + name +
                            " persistence must lie in (-1,1)");
    if (!(std::isfinite(s.innov_std) && s.innov_std >= 0.0))
      throw ValidationError(std::string("invalid shock spec: ") + name +
                            " innovation std must be >= 0");
  };
  check(ygap, "ygap");
  check(cinf, "cinf");
  check(u, "u");
  if (!(std::isfinite(expectation_noise_std) && expectation_noise_std >= 0.0))
    throw ValidationError(
        "invalid shock spec: expectation noise std must be >= 0");
}

ShockMoments ShockProcessSpec::stationary_moments() const {
  validate();
  return {cinf.stationary_var(), ygap.stationary_var(), u.stationary_var()};
}

std::vector<double> sample_intensities(const IntensityDistribution& dist,
                                       std::size_t n, std::uint64_t seed) {
  dist.validate();
  require(n >= 1, "invalid count: n must be >= 1");
  Rng rng(seed, kStreamIntensity);
  std::vector<double> draws(n);
  for (auto& d : draws) d = dist.sample(rng);
  return draws;
}

ShockPaths simulate_shocks(const ShockProcessSpec& spec, std::size_t t_len,
                           std::uint64_t seed) {
  spec.validate();
  require(t_len >= 1, "invalid count: t_len must be >= 1");
  ShockPaths paths;
  Rng rng_y(seed, kStreamYgap);
  Rng rng_c(seed, kStreamCinf);
  Rng rng_u(seed, kStreamU);
  paths.ygap = ar1_path(spec.ygap, t_len, rng_y);
  paths.cinf = ar1_path(spec.cinf, t_len, rng_c);
  paths.u = ar1_path(spec.u, t_len, rng_u);
  return paths;
}

double forward_inflation(const SlopePair& alg, double beta,
                         const ShockProcessSpec& spec, const ShockPaths& paths,
                         std::size_t t) {
  return alg.kappa * paths.ygap[t] / (1.0 - beta * spec.ygap.persistence) +
         alg.kappa_inf * paths.cinf[t] / (1.0 - beta * spec.cinf.persistence) +
         paths.u[t] / (1.0 - beta * spec.u.persistence);
}

double forward_expectation(const SlopePair& alg, double beta,
                           const ShockProcessSpec& spec,
                           const ShockPaths& paths, std::size_t t) {
  return alg.kappa * spec.ygap.persistence * paths.ygap[t] /
             (1.0 - beta * spec.ygap.persistence) +
         alg.kappa_inf * spec.cinf.persistence * paths.cinf[t] /
             (1.0 - beta * spec.cinf.persistence) +
         spec.u.persistence * paths.u[t] / (1.0 - beta * spec.u.persistence);
}

TimeSeriesDataset simulate_aggregate(const ModelParams& params,
                                     const ShockProcessSpec& spec,
                                     std::size_t t_len, std::uint64_t seed) {
  params.validate();
  spec.validate();
  require(t_len >= 2, "invalid count: t_len must be >= 2");

  const SlopePair alg = equilibrium_slopes(params);
  const ShockPaths paths = simulate_shocks(spec, t_len, seed);
  Rng rng_noise(seed, kStreamExpectationNoise);

  TimeSeriesDataset data;
  data.period.reserve(t_len);
  data.pi.reserve(t_len);
  data.pi_e.reserve(t_len);
  for (std::size_t t = 0; t < t_len; ++t) {
    data.period.push_back(period_label(t));
    data.pi.push_back(forward_inflation(alg, params.beta, spec, paths, t));
    double pe = forward_expectation(alg, params.beta, spec, paths, t);
    if (spec.expectation_noise_std > 0.0)
      pe += spec.expectation_noise_std * rng_noise.normal();
    data.pi_e.push_back(pe);
  }
  data.ygap = paths.ygap;
  data.cinf = paths.cinf;
  data.u = paths.u;
  return data;
}

FirmPanelResult simulate_firm_panel(
    const ModelParams& params, const IntensityDistribution& dist,
    const ShockProcessSpec& spec, std::size_t n_firms, std::size_t t_len,
    std::uint64_t seed, const std::vector<std::size_t>& snapshot_times,
    double reset_noise_std) {
  spec.validate();
  require(t_len >= 2, "invalid count: t_len must be >= 2");
  return simulate_firm_panel_on(params, dist, spec,
                                simulate_shocks(spec, t_len, seed), n_firms,
                                seed, snapshot_times, reset_noise_std);
}

FirmPanelResult simulate_firm_panel_on(
    const ModelParams& params, const IntensityDistribution& dist,
    const ShockProcessSpec& spec, const ShockPaths& paths, std::size_t n_firms,
    std::uint64_t seed, const std::vector<std::size_t>& snapshot_times,
    double reset_noise_std) {
  params.validate();
  dist.validate();
  spec.validate();
  const std::size_t t_len = paths.ygap.size();
  require(paths.cinf.size() == t_len && paths.u.size() == t_len,
          "shock paths have unequal lengths");
  require(n_firms >= 2, "invalid count: n_firms must be >= 2");
  require(t_len >= 2, "invalid count: t_len must be >= 2");
  require(std::isfinite(reset_noise_std) && reset_noise_std >= 0.0,
          "reset noise std must be >= 0");

  const SlopePair base = closed_form_slopes(params);
  const SlopePair alg = algorithmic_slopes(params, base);

  FirmPanelResult result;
  result.lambda.resize(n_firms);
  result.algorithmic.assign(n_firms, 0);

  // Per-firm streams: firm i's intensity and fixed t=0 algorithmic flag
  // depend only on (seed, i), so panels of different sizes share their
  // common firms under one seed.
  for (std::size_t i = 0; i < n_firms; ++i) {
    Rng firm_rng(seed, kStreamFirmBase + i);
    result.lambda[i] = dist.sample(firm_rng);
    result.algorithmic[i] = firm_rng.bernoulli(params.phi) ? 1 : 0;
  }

  // Reset targets use the AR(1) present-value factors, so a re-setter jumps
  // far enough that the cross-firm mean reproduces the aggregate inflation
  // of the forward solution. Per-period inflation is (1-theta) times the
  // mean gap between targets and the old price level, hence the 1/(1-theta)
  // scaling of the state terms.
  const double inv_reset_rate = 1.0 / (1.0 - params.theta);
  const double pv_y = 1.0 / (1.0 - params.beta * spec.ygap.persistence);
  const double pv_c = 1.0 / (1.0 - params.beta * spec.cinf.persistence);
  const double pv_u = 1.0 / (1.0 - params.beta * spec.u.persistence);

  std::vector<double> price(n_firms, 0.0);
  Rng rng_noise(seed, kStreamExpectationNoise);

  result.reset_fraction.reserve(t_len - 1);
  auto& agg = result.aggregate;
  agg.period.reserve(t_len - 1);

  auto snapshot_if_requested = [&](std::size_t t) {
    if (std::find(snapshot_times.begin(), snapshot_times.end(), t) !=
        snapshot_times.end()) {
      result.snapshot_times.push_back(t);
      result.snapshots.push_back(price);
    }
  };
  snapshot_if_requested(0);

  double mean_prev = 0.0;
  for (std::size_t t = 1; t < t_len; ++t) {
    std::size_t n_reset = 0;
    for (std::size_t i = 0; i < n_firms; ++i) {
      if (hash_uniform01(seed, kTagCalvo * kTagShift + i, t) >=
          1.0 - params.theta)
        continue;
      ++n_reset;
      const bool is_alg = result.algorithmic[i] != 0;
      const double demand = (is_alg ? 1.0 - params.rho : 1.0) * base.kappa;
      const double cost =
          (is_alg ? 1.0 + params.rho : 1.0) * result.lambda[i] * base.kappa;
      price[i] = mean_prev + inv_reset_rate * (demand * pv_y * paths.ygap[t] +
                                               cost * pv_c * paths.cinf[t] +
                                               pv_u * paths.u[t]);
      if (reset_noise_std > 0.0) {
        const double u1 = hash_uniform01(seed, kTagNoiseA * kTagShift + i, t);
        const double u2 = hash_uniform01(seed, kTagNoiseB * kTagShift + i, t);
        price[i] += reset_noise_std * std::sqrt(-2.0 * std::log(1.0 - u1)) *
                    std::cos(6.283185307179586 * u2);
      }
    }
    result.reset_fraction.push_back(static_cast<double>(n_reset) / n_firms);

    const double mean_now =
        std::accumulate(price.begin(), price.end(), 0.0) / n_firms;
    agg.period.push_back(period_label(t));
    agg.pi.push_back(mean_now - mean_prev);
    double pe = forward_expectation(alg, params.beta, spec, paths, t);
    if (spec.expectation_noise_std > 0.0)
      pe += spec.expectation_noise_std * rng_noise.normal();
    agg.pi_e.push_back(pe);
    agg.ygap.push_back(paths.ygap[t]);
    agg.cinf.push_back(paths.cinf[t]);
    agg.u.push_back(paths.u[t]);
    mean_prev = mean_now;
    snapshot_if_requested(t);
  }

  result.final_prices = std::move(price);
  return result;
}

}  // namespace icpc
