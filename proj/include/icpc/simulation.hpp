#pragma once

#include <cstdint>
#include <vector>

#include "icpc/dataset.hpp"
#include "icpc/model.hpp"
#include "icpc/rng.hpp"

namespace icpc {

// Cross-sectional distribution of firm AI intensities on [0,1] with a
// closed-form mean per kind.
class IntensityDistribution {
 public:
  enum class Kind { kPointMass, kUniform, kTwoPoint, kTruncatedBeta };

  static IntensityDistribution point_mass(double value);
  static IntensityDistribution uniform(double lo, double hi);
  // Mixture placing weight (1 - w_hi) on lo_value and w_hi on hi_value.
  static IntensityDistribution two_point(double lo_value, double hi_value,
                                         double w_hi);
  // Beta(alpha, beta) restricted to [lo, hi] (a sub-interval of [0,1]).
  static IntensityDistribution truncated_beta(double alpha, double beta,
                                              double lo = 0.0, double hi = 1.0);

  Kind kind() const { return kind_; }
  double mean() const;
  double sample(Rng& rng) const;
  void validate() const;

 private:
  IntensityDistribution() = default;
  Kind kind_ = Kind::kPointMass;
  double a_ = 0.0;   // point value / lower support / alpha
  double b_ = 0.0;   // upper support / beta
  double w_ = 0.0;   // two-point weight on the upper value
  double lo_ = 0.0;  // truncation bounds for the beta kind
  double hi_ = 1.0;
};

// AR(1) specification: x_t = persistence * x_{t-1} + innov_std * eps_t.
struct Ar1Spec {
  double persistence = 0.0;
  double innov_std = 1.0;

  double stationary_var() const {
    return innov_std * innov_std / (1.0 - persistence * persistence);
  }
};

// Driving processes of the economy: output gap, inference cost index and
// cost-push shock, plus optional measurement noise on the reported
// expectation series. The u innovations are drawn independently of the cinf
// innovations.
struct ShockProcessSpec {
  Ar1Spec ygap{0.90, 1.0};
  Ar1Spec cinf{0.95, 1.0};
  Ar1Spec u{0.30, 1.0};
  double expectation_noise_std = 0.0;

  void validate() const;
  // Unconditional variances implied by the AR(1) blocks.
  ShockMoments stationary_moments() const;
};

struct ShockPaths {
  std::vector<double> ygap;
  std::vector<double> cinf;
  std::vector<double> u;
};

// One firm of the panel: log price, AI intensity, algorithmic flag.
struct FirmState {
  double price = 0.0;
  double lambda_i = 0.0;
  bool is_algorithmic = false;
};

// n draws from the intensity distribution; deterministic given seed.
std::vector<double> sample_intensities(const IntensityDistribution& dist,
                                       std::size_t n, std::uint64_t seed);

// Stationary-initialized AR(1) paths for (ygap, cinf, u); the u path is
// independent of the cinf path by construction.
ShockPaths simulate_shocks(const ShockProcessSpec& spec, std::size_t t_len,
                           std::uint64_t seed);

// Inflation implied by the forward solution of the inflation equation under
// AR(1) shocks, evaluated at period t of the given paths:
//   pi_t = ka*y_t/(1-beta*rho_y) + ki*c_t/(1-beta*rho_c) + u_t/(1-beta*rho_u)
double forward_inflation(const SlopePair& alg, double beta,
                         const ShockProcessSpec& spec, const ShockPaths& paths,
                         std::size_t t);

// Model-consistent expectation E_t[pi_{t+1}] under the same forward solution.
double forward_expectation(const SlopePair& alg, double beta,
                           const ShockProcessSpec& spec,
                           const ShockPaths& paths, std::size_t t);

// Synthetic aggregate dataset satisfying the inflation equation by
// construction: with zero expectation noise,
//   pi_t - beta*pi_e_{t+1} - ka*ygap_t - ki*cinf_t == u_t  exactly.
TimeSeriesDataset simulate_aggregate(const ModelParams& params,
                                     const ShockProcessSpec& spec,
                                     std::size_t t_len, std::uint64_t seed);

// Result of an N-firm Calvo panel run. Snapshots are full price
// cross-sections at the requested periods. The aggregate dataset has
// t_len - 1 rows; row r covers model period r+1 with pi equal to the change
// in the cross-firm mean log price.
struct FirmPanelResult {
  std::vector<double> lambda;
  std::vector<std::uint8_t> algorithmic;
  std::vector<double> final_prices;
  std::vector<std::size_t> snapshot_times;
  std::vector<std::vector<double>> snapshots;
  std::vector<double> reset_fraction;  // per period, length t_len - 1
  TimeSeriesDataset aggregate;
};

// Simulate n_firms heterogeneous firms under Calvo repricing. Each period a
// Bernoulli(1-theta) subset re-prices toward the closed-form reset target
// implied by its own marginal cost; a fixed fraction phi of firms is
// algorithmic, damping the demand term by (1-rho) and amplifying the cost
// term by (1+rho). The cross-firm mean log price change reproduces the
// aggregate inflation of simulate_aggregate up to O(1/sqrt(n_firms)).
// reset_noise_std adds a mean-zero idiosyncratic pricing error to each
// reset, the particle-level counterpart of the density diffusion term.
FirmPanelResult simulate_firm_panel(
    const ModelParams& params, const IntensityDistribution& dist,
    const ShockProcessSpec& spec, std::size_t n_firms, std::size_t t_len,
    std::uint64_t seed, const std::vector<std::size_t>& snapshot_times = {},
    double reset_noise_std = 0.0);

// Same panel dynamics on externally supplied shock paths, so that several
// panel sizes can be driven by matched shocks while firm-level randomness
// varies with firm_seed. All per-firm draws are keyed on (firm_seed, firm),
// making a smaller panel a strict subset of a larger one.
FirmPanelResult simulate_firm_panel_on(
    const ModelParams& params, const IntensityDistribution& dist,
    const ShockProcessSpec& spec, const ShockPaths& paths, std::size_t n_firms,
    std::uint64_t firm_seed, const std::vector<std::size_t>& snapshot_times = {},
    double reset_noise_std = 0.0);

}  // namespace icpc
