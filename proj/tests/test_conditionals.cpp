#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "csmsn/mcmc.hpp"
#include "csmsn/random.hpp"
#include "csmsn/special.hpp"
#include "test_util.hpp"

using namespace csmsn;

namespace {

// Frozen n=5 toy shared by the conditional oracles.
struct Toy {
  RegressionData data;
  Eigen::VectorXd u, h, resid;
  double Delta = 0.8, tau = 1.3;
  Eigen::VectorXd beta;
  PriorSpec prior;

  Toy() {
    data.X.resize(5, 2);
    data.X << 1, -0.4, 1, 0.9, 1, 1.7, 1, -1.2, 1, 0.1;
    data.y.resize(5);
    data.y << 0.7, 2.3, 4.4, -1.6, 1.1;
    beta.resize(2);
    beta << 0.9, 1.8;
    resid = data.y - data.X * beta;
    u.resize(5);
    u << 1.0, 0.6, 1.4, 0.8, 1.1;
    h.resize(5);
    h << 0.5, 1.2, 0.9, 0.3, 0.7;
    prior.resolve(2);
  }
};

}  // namespace

TEST_CASE("beta conditional matches the dense matrix-algebra oracle") {
  const Toy t;
  const MvnParams got = beta_conditional(t.data, t.u, t.h, t.Delta, t.tau, t.prior);

  // Oracle: build the weighted design explicitly and invert.
  const double b = constants().b;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(5, 5);
  Eigen::VectorXd yd(5);
  for (int i = 0; i < 5; ++i) {
    W(i, i) = t.u(i);
    yd(i) = t.data.y(i) - t.Delta / std::sqrt(t.u(i)) * (t.h(i) - b);
  }
  const Eigen::MatrixXd Sb_inv = t.prior.Sigma_beta.inverse();
  const Eigen::MatrixXd prec = t.data.X.transpose() * W * t.data.X / t.tau + Sb_inv;
  const Eigen::MatrixXd cov = prec.inverse();
  const Eigen::VectorXd mean =
      cov * (t.data.X.transpose() * W * yd / t.tau + Sb_inv * t.prior.mu_beta);

  for (int i = 0; i < 2; ++i) {
    CHECK(got.mean(i) == doctest::Approx(mean(i)).epsilon(1e-12));
    for (int j = 0; j < 2; ++j)
      CHECK(got.cov(i, j) == doctest::Approx(cov(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("beta conditional with no data is the prior") {
  RegressionData empty;
  empty.X.resize(0, 2);
  empty.y.resize(0);
  PriorSpec prior;
  prior.mu_beta = Eigen::VectorXd::Constant(2, 0.7);
  prior.Sigma_beta = 3.0 * Eigen::MatrixXd::Identity(2, 2);
  const MvnParams got = beta_conditional(empty, Eigen::VectorXd(), Eigen::VectorXd(),
                                         0.5, 1.0, prior);
  CHECK(got.mean(0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(got.cov(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(got.cov(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("beta conditional reduces to OLS under a flat prior") {
  const Toy t;
  PriorSpec flat;
  flat.resolve(2);
  flat.Sigma_beta = 1e10 * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd u1 = Eigen::VectorXd::Ones(5);
  const MvnParams got = beta_conditional(t.data, u1, t.h, 0.0, t.tau, flat);
  const Eigen::VectorXd ols =
      (t.data.X.transpose() * t.data.X).ldlt().solve(t.data.X.transpose() * t.data.y);
  CHECK(got.mean(0) == doctest::Approx(ols(0)).epsilon(1e-6));
  CHECK(got.mean(1) == doctest::Approx(ols(1)).epsilon(1e-6));
}

TEST_CASE("h conditional: collapse at Delta = 0 and plug-in arithmetic") {
  const NormalParams collapsed = h_conditional(1.7, 0.9, 0.0, 2.0);
  CHECK(collapsed.mean == doctest::Approx(0.0));
  CHECK(collapsed.variance == doctest::Approx(1.0));

  // Delta = 1, tau = 1, u = 1, resid = 0 -> TN(b/2, 1/2)
  const NormalParams p = h_conditional(0.0, 1.0, 1.0, 1.0);
  CHECK(p.mean == doctest::Approx(0.5 * constants().b).epsilon(1e-12));
  CHECK(p.variance == doctest::Approx(0.5).epsilon(1e-12));

  // general plug-in
  const NormalParams g = h_conditional(0.7, 0.6, 0.8, 1.3);
  const double denom = 0.8 * 0.8 + 1.3;
  CHECK(g.mean ==
        doctest::Approx((0.64 * constants().b + 0.8 * std::sqrt(0.6) * 0.7) / denom)
            .epsilon(1e-12));
  CHECK(g.variance == doctest::Approx(1.3 / denom).epsilon(1e-12));
}

TEST_CASE("h draws follow the stated truncated normal") {
  RngStream rng(21, 0);
  const NormalParams p = h_conditional(0.7, 0.6, 0.8, 1.3);
  std::vector<double> x(100000);
  for (auto& v : x) v = sample_truncated_normal(p.mean, p.variance, 0.0,
                                                std::numeric_limits<double>::infinity(), rng);
  const double sd = std::sqrt(p.variance);
  const double z0 = norm_cdf(-p.mean / sd);
  const double ks = testutil::ks_distance(x, [&](double t) {
    return (norm_cdf((t - p.mean) / sd) - z0) / (1.0 - z0);
  });
  CHECK(ks < 0.005);
}

TEST_CASE("Delta and tau^-1 conditionals match hand-computed oracles") {
  const Toy t;
  const double b = constants().b;

  const NormalParams dp = Delta_conditional(t.resid, t.u, t.h, t.tau, t.prior);
  double s_hb2 = 0.0, s_cross = 0.0;
  for (int i = 0; i < 5; ++i) {
    s_hb2 += (t.h(i) - b) * (t.h(i) - b);
    s_cross += (t.h(i) - b) * std::sqrt(t.u(i)) * t.resid(i);
  }
  const double sd2 = t.prior.sigma2_Delta;
  CHECK(dp.mean == doctest::Approx((sd2 * s_cross + t.prior.mu_Delta * t.tau) /
                                   (sd2 * s_hb2 + t.tau)).epsilon(1e-12));
  CHECK(dp.variance ==
        doctest::Approx(t.tau * sd2 / (sd2 * s_hb2 + t.tau)).epsilon(1e-12));

  const GammaParams gp = tau_inv_conditional(t.resid, t.u, t.h, t.Delta, t.prior);
  double rate = t.prior.d;
  for (int i = 0; i < 5; ++i) {
    const double e = t.resid(i) - t.Delta / std::sqrt(t.u(i)) * (t.h(i) - b);
    rate += 0.5 * t.u(i) * e * e;
  }
  CHECK(gp.shape == doctest::Approx(2.5 + t.prior.c).epsilon(1e-12));
  CHECK(gp.rate == doctest::Approx(rate).epsilon(1e-12));

  // no data -> the priors
  Eigen::VectorXd none;
  const NormalParams dp0 = Delta_conditional(none, none, none, t.tau, t.prior);
  CHECK(dp0.mean == doctest::Approx(t.prior.mu_Delta));
  CHECK(dp0.variance == doctest::Approx(t.prior.sigma2_Delta).epsilon(1e-12));
  const GammaParams gp0 = tau_inv_conditional(none, none, none, 0.0, t.prior);
  CHECK(gp0.shape == doctest::Approx(t.prior.c));
  CHECK(gp0.rate == doctest::Approx(t.prior.d));
}

TEST_CASE("css nu conditional and the boundary case") {
  // u == 1 for all i: sum log u = 0 -> TG(n + a1, a2)
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(7);
  const GammaParams at_boundary = css_nu_conditional(ones, 1.0, 0.4);
  CHECK(at_boundary.shape == doctest::Approx(8.0));
  CHECK(at_boundary.rate == doctest::Approx(0.4).epsilon(1e-12));

  Eigen::VectorXd u(3);
  u << 0.5, 0.25, 0.8;
  const GammaParams g = css_nu_conditional(u, 1.0, 0.4);
  CHECK(g.shape == doctest::Approx(4.0));
  CHECK(g.rate == doctest::Approx(0.4 - std::log(0.5) - std::log(0.25) - std::log(0.8))
                      .epsilon(1e-12));
}

TEST_CASE("cscn conditionals: nu1 beta parameters and the two-point u draw") {
  PriorSpec prior;
  prior.resolve(1);
  // 4 contaminated of 10 with unit beta priors -> beta(5, 7); with
  // alpha1 = beta1 = 1 the stated (n - sum u)/(1 - nu2) + alpha1 form
  // reduces to m + alpha1.
  const BetaParams bp = cscn_nu1_conditional(4, 10, prior);
  CHECK(bp.a == doctest::Approx(5.0));
  CHECK(bp.b == doctest::Approx(7.0));

  // symmetric toy: resid = 0, Delta = 0, tau = 1 ->
  // P(u = nu2) = nu1 sqrt(nu2) / (nu1 sqrt(nu2) + 1 - nu1)
  const double p = cscn_u_prob_contaminated(0.0, 0.5, 0.0, 1.0, 0.3, 0.5);
  const double want = 0.3 * std::sqrt(0.5) / (0.3 * std::sqrt(0.5) + 0.7);
  CHECK(p == doctest::Approx(want).epsilon(1e-12));

  // nu1 -> 0 kills contamination
  CHECK(cscn_u_prob_contaminated(0.4, 0.5, 0.3, 1.0, 1e-300, 0.5) ==
        doctest::Approx(0.0));
}

TEST_CASE("csgt nu2 conditional and hyper-rate conditionals") {
  const GammaParams g = csgt_nu2_conditional(8, 5.0, 7.2, 0.3);
  CHECK(g.shape == doctest::Approx(0.5 * 8 * 5.0 + 1.0));
  CHECK(g.rate == doctest::Approx(0.5 * 7.2 + 0.3).epsilon(1e-12));

  CHECK(cst_lambda_conditional(6.0).shape == doctest::Approx(2.0));
  CHECK(cst_lambda_conditional(6.0).rate == doctest::Approx(4.0));
  CHECK(css_theta_conditional(3.0).rate == doctest::Approx(2.0));
  // the nu2 exponential prior is untruncated, so its hyper rate is nu2
  CHECK(csgt_lambda2_conditional(3.5).rate == doctest::Approx(3.5));
}

TEST_CASE("cst lambda hyper draws stay inside the stated bounds and law") {
  RngStream rng(22, 0);
  const GammaParams lp = cst_lambda_conditional(6.5);  // TG(2, 4.5) I(.02,.49)
  std::vector<double> x(100000);
  for (auto& v : x) {
    v = sample_truncated_gamma(lp.shape, lp.rate, 0.02, 0.49, rng);
    REQUIRE(v > 0.02);
    REQUIRE(v < 0.49);
  }
  const auto cdf = testutil::grid_cdf(
      [&](double w) { return std::log(w) - lp.rate * w; }, 0.02, 0.49);
  CHECK(testutil::ks_distance(x, [&](double w) { return cdf(w); }) < 0.005);
}

// ---- MH kernels against grid-normalized CDFs (1e5 draws, sup gap < 0.01) ----

TEST_CASE("cst u kernel: MH stationary law matches the grid CDF") {
  const Toy t;
  RngStream rng(23, 0);
  const double resid = t.resid(1), h = t.h(1);
  auto logk = [&](double u) { return log_kernel_u_cst(u, resid, h, t.Delta, t.tau, 4.0); };
  auto draws = testutil::mh_chain(logk, [](double v) { return std::log(v); },
                        [](double x) { return std::exp(x); },
                        [](double v) { return std::log(v); }, 1.0, 1.6, 140000, rng);
  draws.erase(draws.begin(), draws.begin() + 40000);
  const auto cdf = testutil::grid_cdf(logk, 1e-9, 30.0);
  CHECK(testutil::ks_distance(draws, [&](double w) { return cdf(w); }) < 0.01);
}

TEST_CASE("cst u kernel reduces to a gamma law at Delta = 0") {
  RngStream rng(24, 0);
  const double resid = 1.4, tau = 1.3, nu = 4.0;
  // Delta = 0 drops the h term, leaving an exact gamma kernel.
  auto logk = [&](double u) { return log_kernel_u_cst(u, resid, 0.6, 0.0, tau, nu); };
  auto draws = testutil::mh_chain(logk, [](double v) { return std::log(v); },
                        [](double x) { return std::exp(x); },
                        [](double v) { return std::log(v); }, 1.0, 1.6, 220000, rng);
  draws.erase(draws.begin(), draws.begin() + 20000);
  // gamma((nu+1)/2, (resid^2/tau + nu)/2)
  const double shape = 0.5 * (nu + 1.0);
  const double rate = 0.5 * (resid * resid / tau + nu);
  CHECK(testutil::mean(draws) == doctest::Approx(shape / rate).epsilon(0.02));
  CHECK(testutil::variance(draws) == doctest::Approx(shape / (rate * rate)).epsilon(0.08));
}

TEST_CASE("css u kernel on (0,1): logit-walk MH matches the grid CDF") {
  const Toy t;
  RngStream rng(25, 0);
  const double resid = t.resid(2), h = t.h(2);
  auto logk = [&](double u) { return log_kernel_u_css(u, resid, h, t.Delta, t.tau, 2.5); };
  auto draws = testutil::mh_chain(
      logk, [](double v) { return std::log(v / (1.0 - v)); },
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double v) { return std::log(v) + std::log1p(-v); }, 0.5, 1.8, 140000, rng);
  draws.erase(draws.begin(), draws.begin() + 40000);
  const auto cdf = testutil::grid_cdf(logk, 1e-9, 1.0 - 1e-9);
  CHECK(testutil::ks_distance(draws, [&](double w) { return cdf(w); }) < 0.01);
}

TEST_CASE("csgt u kernel: MH stationary law matches the grid CDF") {
  const Toy t;
  RngStream rng(26, 0);
  const double resid = t.resid(3), h = t.h(3);
  auto logk = [&](double u) {
    return log_kernel_u_csgt(u, resid, h, t.Delta, t.tau, 5.0, 3.0);
  };
  auto draws = testutil::mh_chain(logk, [](double v) { return std::log(v); },
                        [](double x) { return std::exp(x); },
                        [](double v) { return std::log(v); }, 1.0, 1.5, 140000, rng);
  draws.erase(draws.begin(), draws.begin() + 40000);
  const auto cdf = testutil::grid_cdf(logk, 1e-9, 40.0);
  CHECK(testutil::ks_distance(draws, [&](double w) { return cdf(w); }) < 0.01);
}

TEST_CASE("cst nu kernel: MH on log(nu-2) matches the grid CDF") {
  RngStream rng(27, 0);
  const int n = 5;
  const double sum_u = 5.4, sum_log_u = -0.6, lambda = 0.25;
  auto logk = [&](double nu) { return log_kernel_nu_cst(nu, n, sum_u, sum_log_u, lambda); };
  auto draws = testutil::mh_chain(logk, [](double v) { return std::log(v - 2.0); },
                        [](double x) { return 2.0 + std::exp(x); },
                        [](double v) { return std::log(v - 2.0); }, 5.0, 1.4, 200000, rng);
  draws.erase(draws.begin(), draws.begin() + 50000);
  const auto cdf = testutil::grid_cdf(logk, 2.0 + 1e-8, 120.0);
  CHECK(testutil::ks_distance(draws, [&](double w) { return cdf(w); }) < 0.01);
}

TEST_CASE("csgt nu1 kernel: MH on log(nu1-2) matches the grid CDF") {
  RngStream rng(28, 0);
  const int n = 5;
  auto logk = [&](double nu1) {
    return log_kernel_nu1_csgt(nu1, n, 3.2, 5.4, -0.6, 0.25);
  };
  auto draws = testutil::mh_chain(logk, [](double v) { return std::log(v - 2.0); },
                        [](double x) { return 2.0 + std::exp(x); },
                        [](double v) { return std::log(v - 2.0); }, 5.0, 1.4, 200000, rng);
  draws.erase(draws.begin(), draws.begin() + 50000);
  const auto cdf = testutil::grid_cdf(logk, 2.0 + 1e-8, 150.0);
  CHECK(testutil::ks_distance(draws, [&](double w) { return cdf(w); }) < 0.01);
}

TEST_CASE("cscn nu2 kernel: logit-walk MH matches the grid CDF") {
  RngStream rng(29, 0);
  PriorSpec prior;
  prior.resolve(1);
  const int m = 4;
  const double sum_r2 = 3.1, sum_hr = 0.7, tau = 1.2;
  auto logk = [&](double nu2) {
    return log_kernel_nu2_cscn(nu2, m, sum_r2, sum_hr, tau, prior);
  };
  auto draws = testutil::mh_chain(
      logk, [](double v) { return std::log(v / (1.0 - v)); },
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double v) { return std::log(v) + std::log1p(-v); }, 0.5, 1.5, 140000, rng);
  draws.erase(draws.begin(), draws.begin() + 40000);
  const auto cdf = testutil::grid_cdf(logk, 1e-9, 1.0 - 1e-9);
  CHECK(testutil::ks_distance(draws, [&](double w) { return cdf(w); }) < 0.01);
}

TEST_CASE("csgt delta kernel: even under symmetric latents, grid CDF otherwise") {
  // resid = 0, h = b zero the data terms: the kernel must be even in delta
  for (double d : {0.1, 0.45, 0.9})
    CHECK(log_kernel_delta_csgt(d, 5, 0.0, 0.0, 0.0) ==
          doctest::Approx(log_kernel_delta_csgt(-d, 5, 0.0, 0.0, 0.0)).epsilon(1e-12));

  RngStream rng(30, 0);
  const int n = 5;
  const double s_urr = 6.0, s_sur = 1.8, s_hb2 = 1.1;
  auto logk = [&](double d) { return log_kernel_delta_csgt(d, n, s_urr, s_sur, s_hb2); };
  auto draws = testutil::mh_chain(logk, [](double v) { return std::atanh(v); },
                        [](double x) { return std::tanh(x); },
                        [](double v) { return std::log1p(-v * v); }, 0.0, 1.0, 140000, rng);
  draws.erase(draws.begin(), draws.begin() + 40000);
  const auto cdf = testutil::grid_cdf(logk, -1.0 + 1e-9, 1.0 - 1e-9);
  CHECK(testutil::ks_distance(draws, [&](double w) { return cdf(w); }) < 0.01);
}

TEST_CASE("delta proposal adapts into the target band") {
  // run a small csgt chain and require the recorded sampling-phase
  // acceptance rate to have adapted into [0.3, 0.6]
  RngStream rng(31, 0);
  CpParams truth;
  truth.family = Family::csgt;
  truth.beta = Eigen::VectorXd::Constant(1, 1.0);
  truth.sigma2 = 1.0;
  truth.gamma = 0.5;
  truth.nu = {8.0, 8.0};
  RegressionData data;
  data.X = Eigen::MatrixXd::Ones(60, 1);
  data.y = simulate_response(data.X, truth, rng);
  SamplerConfig cfg;
  cfg.iterations = 4000;
  cfg.burn_in = 2000;
  cfg.thin = 2;
  cfg.seed = 99;
  const Chain chain = run_chain(data, Family::csgt, PriorSpec{}, cfg);
  const double rate = chain.acceptance.at("delta").rate();
  CHECK(rate > 0.3);
  CHECK(rate < 0.6);
}
