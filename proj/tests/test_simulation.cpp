#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "icpc/errors.hpp"
#include "icpc/formulas.hpp"
#include "icpc/simulation.hpp"

using namespace icpc;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

double corr_of(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Independent least-squares oracle: y on (x1, x2, const) via the 3x3 normal
// equations, solved by Gaussian elimination.
std::pair<double, double> ols2_oracle(const std::vector<double>& y,
                                      const std::vector<double>& x1,
                                      const std::vector<double>& x2) {
  double a[3][4] = {};
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double row[3] = {x1[i], x2[i], 1.0};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) a[r][c] += row[r] * row[c];
      a[r][3] += row[r] * y[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return {a[0][3] / a[0][0], a[1][3] / a[1][1]};
}

ShockProcessSpec quiet_spec() {
  ShockProcessSpec spec;
  spec.ygap = {0.0, 0.0};
  spec.cinf = {0.0, 0.0};
  spec.u = {0.0, 0.0};
  spec.expectation_noise_std = 0.0;
  return spec;
}

}  // namespace

TEST_CASE("intensity draws: degenerate, deterministic, mean-consistent") {
  const auto point = IntensityDistribution::point_mass(0.18);
  const auto five = sample_intensities(point, 5, 7);
  CHECK(five == std::vector<double>{0.18, 0.18, 0.18, 0.18, 0.18});

  const auto unif = IntensityDistribution::uniform(0.0, 1.0);
  const auto draws = sample_intensities(unif, 100000, 11);
  CHECK(std::abs(mean_of(draws) - 0.5) < 0.01);
  for (double d : draws) {
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }

  CHECK(sample_intensities(unif, 1000, 3) == sample_intensities(unif, 1000, 3));

  const auto two = IntensityDistribution::two_point(0.1, 0.7, 0.25);
  CHECK(two.mean() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(mean_of(sample_intensities(two, 100000, 5)) - 0.25) < 0.01);

  const auto tb = IntensityDistribution::truncated_beta(2.0, 5.0, 0.05, 0.6);
  const auto tb_draws = sample_intensities(tb, 100000, 9);
  CHECK(std::abs(mean_of(tb_draws) - tb.mean()) < 0.01);
  for (double d : tb_draws) {
    CHECK(d >= 0.05);
    CHECK(d <= 0.6);
  }

  CHECK_THROWS_AS(IntensityDistribution::point_mass(1.2), ValidationError);
  CHECK_THROWS_AS(IntensityDistribution::uniform(0.4, 0.2), ValidationError);
  CHECK_THROWS_AS(IntensityDistribution::truncated_beta(-1.0, 2.0),
                  ValidationError);
  CHECK_THROWS_AS(sample_intensities(point, 0, 1), ValidationError);
}

TEST_CASE("shock paths: stationary variance and orthogonality") {
  const auto zero = simulate_shocks(quiet_spec(), 100, 1);
  for (double v : zero.ygap) CHECK(v == 0.0);
  for (double v : zero.u) CHECK(v == 0.0);

  ShockProcessSpec spec;
  spec.ygap = {0.9, 1.0};
  spec.cinf = {0.9, 1.0};
  spec.u = {0.9, 1.0};
  const auto paths = simulate_shocks(spec, 100000, 17);
  const double target = 1.0 / (1.0 - 0.81);
  CHECK(var_of(paths.ygap) == doctest::Approx(target).epsilon(0.05));
  CHECK(var_of(paths.cinf) == doctest::Approx(target).epsilon(0.05));
  CHECK(var_of(paths.u) == doctest::Approx(target).epsilon(0.05));
  CHECK(std::abs(corr_of(paths.u, paths.cinf)) < 0.02);

  ShockProcessSpec bad;
  bad.ygap.persistence = 1.0;
  CHECK_THROWS_AS(simulate_shocks(bad, 10, 1), ValidationError);
}

TEST_CASE("aggregate dataset: identity, quiet limit, determinism") {
  const ModelParams params;
  SUBCASE("steady state with no shocks") {
    const auto data = simulate_aggregate(params, quiet_spec(), 50, 3);
    for (double v : data.pi) CHECK(v == 0.0);
    for (double v : data.pi_e) CHECK(v == 0.0);
  }

  SUBCASE("per-period residual identity with zero expectation noise") {
    ShockProcessSpec spec;  // module defaults
    const auto data = simulate_aggregate(params, spec, 2000, 5);
    const auto alg = equilibrium_slopes(params);
    for (std::size_t t = 0; t < data.size(); ++t) {
      const double resid = data.pi[t] - params.beta * data.pi_e[t] -
                           alg.kappa * data.ygap[t] -
                           alg.kappa_inf * data.cinf[t];
      CHECK(resid == doctest::Approx(data.u[t]).epsilon(1e-10));
    }
  }

  SUBCASE("static case recovers the slopes by least squares") {
    ShockProcessSpec spec;
    spec.ygap = {0.0, 1.0};
    spec.cinf = {0.0, 1.0};
    spec.u = {0.0, 1.0};
    const auto data = simulate_aggregate(params, spec, 100000, 13);
    for (double v : data.pi_e) CHECK(v == 0.0);  // iid shocks: E_t pi_{t+1} = 0
    const auto [b1, b2] = ols2_oracle(data.pi, data.ygap, data.cinf);
    const auto alg = equilibrium_slopes(params);
    CHECK(std::abs(b1 - alg.kappa) < 4.0 / std::sqrt(100000.0));
    CHECK(std::abs(b2 - alg.kappa_inf) < 4.0 / std::sqrt(100000.0));
  }

  SUBCASE("bit-identical datasets for identical seeds") {
    ShockProcessSpec spec;
    spec.expectation_noise_std = 0.3;
    const auto a = simulate_aggregate(params, spec, 500, 77);
    const auto b = simulate_aggregate(params, spec, 500, 77);
    CHECK(a.pi == b.pi);
    CHECK(a.pi_e == b.pi_e);
    CHECK(a.ygap == b.ygap);
    CHECK(a.cinf == b.cinf);
    CHECK(a.u == b.u);
    const auto c = simulate_aggregate(params, spec, 500, 78);
    CHECK(a.pi != c.pi);
  }

  CHECK_THROWS_AS(simulate_aggregate(params, quiet_spec(), 1, 1),
                  ValidationError);
}

TEST_CASE("firm panel: repricing frequency matches the Calvo rate") {
  const ModelParams params;  // theta = 0.75 -> repricing probability 0.25
  ShockProcessSpec spec;
  spec.u.innov_std = 0.2;
  const auto panel = simulate_firm_panel(
      params, IntensityDistribution::point_mass(0.18), spec, 200, 10000, 21);
  CHECK(std::abs(mean_of(panel.reset_fraction) - 0.25) < 0.01);
}

TEST_CASE("firm panel: two firms with no shocks hold a common constant") {
  const auto panel = simulate_firm_panel(
      ModelParams{}, IntensityDistribution::point_mass(0.18), quiet_spec(), 2,
      200, 4);
  CHECK(panel.final_prices[0] == panel.final_prices[1]);
  CHECK(panel.final_prices[0] == 0.0);
  for (double p : panel.aggregate.pi) CHECK(p == 0.0);
}

TEST_CASE("firm panel aggregate matches the forward-solution inflation") {
  const ModelParams params;
  ShockProcessSpec spec;  // defaults
  const std::uint64_t seed = 99;
  const std::size_t t_len = 400;
  const auto agg = simulate_aggregate(params, spec, t_len, seed);
  const double pi_sd = std::sqrt(var_of(agg.pi));

  auto rms_gap = [&](std::size_t n_firms) {
    const auto panel = simulate_firm_panel(
        params, IntensityDistribution::uniform(0.0, 0.36), spec, n_firms,
        t_len, seed);
    double s = 0.0;
    for (std::size_t r = 0; r < panel.aggregate.size(); ++r) {
      const double d = panel.aggregate.pi[r] - agg.pi[r + 1];
      s += d * d;
    }
    return std::sqrt(s / static_cast<double>(panel.aggregate.size()));
  };

  const double gap_small = rms_gap(100);
  const double gap_large = rms_gap(10000);
  // O(1/sqrt(n)): two decades of n buy about one decade of accuracy.
  CHECK(gap_large < gap_small / 4.0);
  CHECK(gap_large < 0.1 * pi_sd);
}

TEST_CASE("firm panel: mean intensity converges at the root-n rate") {
  const auto dist = IntensityDistribution::uniform(0.0, 1.0);
  const double sd = std::sqrt(1.0 / 12.0);
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const auto draws = sample_intensities(dist, n, 31);
    CHECK(std::abs(mean_of(draws) - 0.5) <
          4.0 * sd / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("firm panel rejects degenerate inputs") {
  CHECK_THROWS_AS(
      simulate_firm_panel(ModelParams{}, IntensityDistribution::point_mass(0.1),
                          quiet_spec(), 1, 100, 1),
      ValidationError);
  CHECK_THROWS_AS(
      simulate_firm_panel(ModelParams{}, IntensityDistribution::point_mass(0.1),
                          quiet_spec(), 10, 1, 1),
      ValidationError);
}
