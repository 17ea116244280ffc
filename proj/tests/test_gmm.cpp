#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "icpc/errors.hpp"
#include "icpc/formulas.hpp"
#include "icpc/gmm.hpp"
#include "icpc/rng.hpp"

using namespace icpc;

namespace {

// Brute-force long-run covariance oracle: explicit double loop over lags of
// the demeaned series with Bartlett weights.
Eigen::MatrixXd newey_west_oracle(const Eigen::MatrixXd& m, int bw) {
  const auto t = m.rows();
  const auto l = m.cols();
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(l);
  for (Eigen::Index i = 0; i < t; ++i) mean += m.row(i);
  mean /= static_cast<double>(t);

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(l, l);
  for (int j = -bw; j <= bw; ++j) {
    const double w = 1.0 - std::abs(j) / (bw + 1.0);
    for (Eigen::Index ti = 0; ti < t; ++ti) {
      const Eigen::Index tj = ti - j;
      if (tj < 0 || tj >= t) continue;
      s += w * (m.row(ti) - mean).transpose() * (m.row(tj) - mean) /
           static_cast<double>(t);
    }
  }
  return s;
}

// Generic derivative-free minimizer (Nelder-Mead) for the 2-parameter GMM
// objective, independent of the closed-form path.
Eigen::Vector2d nelder_mead2(
    const std::function<double(const Eigen::Vector2d&)>& f,
    Eigen::Vector2d start) {
  std::vector<Eigen::Vector2d> simplex{start,
                                       start + Eigen::Vector2d(0.05, 0.0),
                                       start + Eigen::Vector2d(0.0, 0.05)};
  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [&](const auto& a, const auto& b) { return f(a) < f(b); });
  };
  for (int it = 0; it < 2000; ++it) {
    order();
    const Eigen::Vector2d centroid = 0.5 * (simplex[0] + simplex[1]);
    const Eigen::Vector2d reflected = centroid + (centroid - simplex[2]);
    if (f(reflected) < f(simplex[0])) {
      const Eigen::Vector2d expanded = centroid + 2.0 * (centroid - simplex[2]);
      simplex[2] = f(expanded) < f(reflected) ? expanded : reflected;
    } else if (f(reflected) < f(simplex[1])) {
      simplex[2] = reflected;
    } else {
      const Eigen::Vector2d contracted =
          centroid + 0.5 * (simplex[2] - centroid);
      if (f(contracted) < f(simplex[2])) {
        simplex[2] = contracted;
      } else {
        simplex[1] = simplex[0] + 0.5 * (simplex[1] - simplex[0]);
        simplex[2] = simplex[0] + 0.5 * (simplex[2] - simplex[0]);
      }
    }
    if ((simplex[0] - simplex[2]).norm() < 1e-12) break;
  }
  order();
  return simplex[0];
}

ShockProcessSpec estimation_spec() {
  // iid cost-push so lagged instruments satisfy the orthogonality condition
  ShockProcessSpec spec;
  spec.u = {0.0, 0.5};
  return spec;
}

}  // namespace

TEST_CASE("moment matrix basics") {
  const ModelParams params;
  const auto alg = equilibrium_slopes(params);
  ShockProcessSpec noiseless = estimation_spec();
  noiseless.u.innov_std = 0.0;
  const auto clean = simulate_aggregate(params, noiseless, 400, 5);

  const InstrumentSpec spec;
  SUBCASE("zero residual makes every moment zero") {
    const auto m =
        moment_vector(clean, spec, params.beta, alg.kappa, alg.kappa_inf);
    CHECK(m.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("the constant instrument column reduces to the residual mean") {
    const auto data = simulate_aggregate(params, estimation_spec(), 400, 5);
    const auto m =
        moment_vector(data, spec, params.beta, alg.kappa, alg.kappa_inf);
    const auto sys = build_iv_matrices(data, spec, params.beta);
    const Eigen::VectorXd resid =
        sys.y - sys.x * Eigen::Vector2d(alg.kappa, alg.kappa_inf);
    CHECK(m.col(0).mean() == doctest::Approx(resid.mean()).epsilon(1e-14));
  }

  SUBCASE("perturbing kappa shifts mean moments by -delta * mean(z*ygap)") {
    const auto data = simulate_aggregate(params, estimation_spec(), 400, 5);
    const double delta = 0.37;
    const auto m0 =
        moment_vector(data, spec, params.beta, alg.kappa, alg.kappa_inf);
    const auto m1 = moment_vector(data, spec, params.beta, alg.kappa + delta,
                                  alg.kappa_inf);
    const auto sys = build_iv_matrices(data, spec, params.beta);
    for (int j = 0; j < spec.count(); ++j) {
      const double expected =
          -delta * (sys.z.col(j).array() * sys.x.col(0).array()).mean();
      CHECK(m1.col(j).mean() - m0.col(j).mean() ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("long-run covariance estimator") {
  SUBCASE("bandwidth zero returns the sample covariance") {
    Rng rng(3);
    Eigen::MatrixXd m(200, 2);
    for (int t = 0; t < 200; ++t) {
      m(t, 0) = rng.normal();
      m(t, 1) = 0.5 * m(t, 0) + rng.normal();
    }
    const auto s = newey_west(m, 0);
    const auto gamma0 = newey_west_oracle(m, 0);
    CHECK((s - gamma0).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("matches the brute-force oracle on random small instances") {
    Rng rng(42);
    for (int trial = 0; trial < 25; ++trial) {
      const int t = 20 + static_cast<int>(rng.next_u64() % 31);
      const int l = 1 + static_cast<int>(rng.next_u64() % 3);
      const int bw = static_cast<int>(rng.next_u64() % 6);
      Eigen::MatrixXd m(t, l);
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < l; ++j) m(i, j) = rng.normal();
      const auto fast = newey_west(m, bw);
      const auto slow = newey_west_oracle(m, bw);
      CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
      // symmetric PSD
      CHECK((fast - fast.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fast);
      CHECK(eig.eigenvalues().minCoeff() > -1e-12);
    }
  }

  SUBCASE("white noise: S stays near the lag-zero covariance") {
    Rng rng(7);
    Eigen::MatrixXd m(100000, 1);
    for (int t = 0; t < m.rows(); ++t) m(t, 0) = rng.normal();
    const auto s = newey_west(m, 10);
    const auto gamma0 = newey_west(m, 0);
    CHECK(s(0, 0) == doctest::Approx(gamma0(0, 0)).epsilon(0.05));
  }

  SUBCASE("first-order moving average: matches the analytic long-run variance") {
    Rng rng(9);
    const double theta_ma = 0.5;
    const int t_len = 100000;
    Eigen::MatrixXd m(t_len, 1);
    double prev = rng.normal();
    for (int t = 0; t < t_len; ++t) {
      const double eps = rng.normal();
      m(t, 0) = eps + theta_ma * prev;
      prev = eps;
    }
    const auto s = newey_west(m, automatic_bandwidth(t_len));
    const double analytic = (1.0 + theta_ma) * (1.0 + theta_ma);
    CHECK(s(0, 0) == doctest::Approx(analytic).epsilon(0.05));
  }

  SUBCASE("bandwidth out of range") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(10, 1);
    CHECK_THROWS_AS(newey_west(m, 10), ValidationError);
    CHECK_THROWS_AS(newey_west(m, -1), ValidationError);
  }
}

TEST_CASE("noiseless just-identified data are recovered exactly") {
  const ModelParams params;
  const auto alg = equilibrium_slopes(params);
  ShockProcessSpec spec = estimation_spec();
  spec.u.innov_std = 0.0;
  const auto data = simulate_aggregate(params, spec, 500, 11);
  InstrumentSpec just;
  just.constant = false;
  just.pi_lags = 0;
  just.ygap_lags = 1;
  just.cinf_lags = 1;
  const auto fit = two_step_gmm(data, just, params.beta);
  CHECK(fit.kappa_hat == doctest::Approx(alg.kappa).epsilon(1e-10));
  CHECK(fit.kappa_inf_hat == doctest::Approx(alg.kappa_inf).epsilon(1e-10));
  CHECK(fit.j_dof == 0);
}

TEST_CASE("monte carlo recovery of the calibrated slopes") {
  const ModelParams params;
  const auto alg = equilibrium_slopes(params);
  const InstrumentSpec spec;
  const std::size_t reps = 12;
  double sum_k = 0.0, sum_ki = 0.0, ss_k = 0.0, ss_ki = 0.0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const auto data =
        simulate_aggregate(params, estimation_spec(), 3000, 100 + rep);
    const auto fit = two_step_gmm(data, spec, params.beta);
    sum_k += fit.kappa_hat;
    sum_ki += fit.kappa_inf_hat;
    ss_k += fit.kappa_hat * fit.kappa_hat;
    ss_ki += fit.kappa_inf_hat * fit.kappa_inf_hat;
  }
  const double n = static_cast<double>(reps);
  const double mean_k = sum_k / n;
  const double mean_ki = sum_ki / n;
  const double se_k = std::sqrt((ss_k / n - mean_k * mean_k) / (n - 1.0));
  const double se_ki = std::sqrt((ss_ki / n - mean_ki * mean_ki) / (n - 1.0));
  CHECK(std::abs(mean_k - alg.kappa) < 2.5 * se_k);
  CHECK(std::abs(mean_ki - alg.kappa_inf) < 2.5 * se_ki);
}

TEST_CASE("overidentification test rejects at roughly the nominal rate") {
  const ModelParams params;
  const InstrumentSpec spec;  // L = 5, dof = 3
  const double crit = 7.814727903251179;  // chi2(3) at 5%
  std::size_t rejections = 0;
  const std::size_t reps = 400;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const auto data =
        simulate_aggregate(params, estimation_spec(), 2000, 5000 + rep);
    const auto fit = two_step_gmm(data, spec, params.beta);
    if (fit.j_stat > crit) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  CHECK(rate > 0.02);
  CHECK(rate < 0.09);
}

TEST_CASE("estimates are invariant to instrument rescaling") {
  const ModelParams params;
  const auto data = simulate_aggregate(params, estimation_spec(), 1500, 23);
  const InstrumentSpec spec;
  auto sys = build_iv_matrices(data, spec, params.beta);
  const auto base = two_step_gmm(sys);
  sys.z.col(2) *= 137.0;
  sys.z.col(4) *= 1e-3;
  const auto scaled = two_step_gmm(sys);
  CHECK(scaled.kappa_hat == doctest::Approx(base.kappa_hat).epsilon(1e-10));
  CHECK(scaled.kappa_inf_hat ==
        doctest::Approx(base.kappa_inf_hat).epsilon(1e-10));
}

TEST_CASE("closed form agrees with a generic numerical minimizer") {
  const ModelParams params;
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const auto data = simulate_aggregate(params, estimation_spec(), 800,
                                         900 + trial);
    const auto sys = build_iv_matrices(data, InstrumentSpec{}, params.beta);
    const auto t_eff = static_cast<double>(sys.y.size());
    const auto fit =
        two_step_gmm(sys, std::nullopt, FirstStepWeight::kIdentity);

    auto objective = [&](const Eigen::Vector2d& b) {
      const Eigen::VectorXd g = sys.z.transpose() * (sys.y - sys.x * b) / t_eff;
      return g.squaredNorm();
    };
    const Eigen::Vector2d start(fit.kappa_first + 0.05 * rng.normal(),
                                fit.kappa_inf_first + 0.05 * rng.normal());
    const Eigen::Vector2d numeric = nelder_mead2(objective, start);
    CHECK(numeric(0) == doctest::Approx(fit.kappa_first).epsilon(1e-8));
    CHECK(numeric(1) == doctest::Approx(fit.kappa_inf_first).epsilon(1e-8));
  }
}

TEST_CASE("collinear regressors raise a rank error") {
  const ModelParams params;
  auto data = simulate_aggregate(params, estimation_spec(), 400, 3);
  data.cinf = data.ygap;  // perfectly collinear design
  CHECK_THROWS_AS(two_step_gmm(data, InstrumentSpec{}, params.beta),
                  NumericalError);
}

TEST_CASE("insufficient samples and bad specs are rejected") {
  const ModelParams params;
  const auto data = simulate_aggregate(params, estimation_spec(), 20, 3);
  CHECK_THROWS_AS(two_step_gmm(data, InstrumentSpec{}, params.beta),
                  ValidationError);
  InstrumentSpec none;
  none.pi_lags = none.ygap_lags = none.cinf_lags = 0;
  CHECK_THROWS_AS(none.validate(), ValidationError);
}

TEST_CASE("consistency study: single replication reduces to absolute error") {
  const ModelParams params;
  const auto spec = estimation_spec();
  const InstrumentSpec instruments;
  const std::uint64_t seed = 314;
  const auto study =
      consistency_study(params, spec, instruments, {600}, 1, seed);
  // replication seed scheme: seed + rep + 1000003 * grid_index
  const auto data = simulate_aggregate(params, spec, 600, seed);
  const auto fit = two_step_gmm(data, instruments, params.beta);
  const auto truth = equilibrium_slopes(params);
  CHECK(study.rows[0].rmse_kappa ==
        doctest::Approx(std::abs(fit.kappa_hat - truth.kappa)).epsilon(1e-12));
  CHECK(study.rows[0].rmse_kappa_inf ==
        doctest::Approx(std::abs(fit.kappa_inf_hat - truth.kappa_inf))
            .epsilon(1e-12));
}

TEST_CASE("consistency study: RMSE falls with sample size, deterministically") {
  const ModelParams params;
  const auto study = consistency_study(params, estimation_spec(),
                                       InstrumentSpec{}, {400, 3200}, 24, 77);
  CHECK(study.rows[0].rmse_kappa > study.rows[1].rmse_kappa);
  CHECK(study.rows[0].rmse_kappa_inf > study.rows[1].rmse_kappa_inf);
  CHECK(study.slope_kappa < 0.0);
  const auto again = consistency_study(params, estimation_spec(),
                                       InstrumentSpec{}, {400, 3200}, 24, 77);
  CHECK(again.rows[0].rmse_kappa == study.rows[0].rmse_kappa);
  CHECK(again.slope_kappa_inf == study.slope_kappa_inf);
}
