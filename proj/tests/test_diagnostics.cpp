#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "csmsn/densities.hpp"
#include "csmsn/diagnostics.hpp"
#include "csmsn/errors.hpp"
#include "csmsn/random.hpp"
#include "test_util.hpp"

using namespace csmsn;

namespace {

// A fabricated chain whose draws are all identical (degenerate posterior).
std::vector<Chain> degenerate_chain(Family f, const Eigen::VectorXd& beta, double s2,
                                    double g, const std::vector<double>& nu, int m) {
  Chain c;
  c.family = f;
  for (int j = 0; j < beta.size(); ++j) c.columns.push_back("beta" + std::to_string(j));
  c.columns.insert(c.columns.end(), {"Delta", "tau", "delta", "sigma2", "gamma"});
  if (f == Family::cst || f == Family::css) c.columns.push_back("nu");
  if (f == Family::cscn || f == Family::csgt) {
    c.columns.push_back("nu1");
    c.columns.push_back("nu2");
  }
  c.draws.resize(m, static_cast<Eigen::Index>(c.columns.size()));
  for (int i = 0; i < m; ++i) {
    Eigen::Index j = 0;
    for (int k = 0; k < beta.size(); ++k) c.draws(i, j++) = beta(k);
    c.draws(i, j++) = 0.0;  // Delta
    c.draws(i, j++) = s2;   // tau (placeholder on the degenerate chain)
    c.draws(i, j++) = delta_from_gamma(g);
    c.draws(i, j++) = s2;
    c.draws(i, j++) = g;
    for (double v : nu) c.draws(i, j++) = v;
  }
  return {c};
}

}  // namespace

TEST_CASE("cpo: single draw, constant likelihood, harmonic mean") {
  // M = 1: CPO_i equals that draw's likelihood exactly
  Eigen::MatrixXd l1(1, 3);
  l1 << -1.0, -2.0, -0.5;
  const CpoResult r1 = cpo(l1);
  for (int i = 0; i < 3; ++i) CHECK(r1.log_cpo(i) == doctest::Approx(l1(0, i)).epsilon(1e-14));
  CHECK(r1.lpml == doctest::Approx(-3.5).epsilon(1e-12));

  // constant likelihood across draws
  Eigen::MatrixXd lc = Eigen::MatrixXd::Constant(40, 2, -1.3);
  const CpoResult rc = cpo(lc);
  CHECK(rc.log_cpo(0) == doctest::Approx(-1.3).epsilon(1e-12));

  // two draws with likelihoods 1 and 1/3 -> harmonic mean 1/2
  Eigen::MatrixXd l2(2, 1);
  l2 << 0.0, std::log(1.0 / 3.0);
  CHECK(cpo(l2).log_cpo(0) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("cpo log-domain equals the direct computation on a benign case") {
  RngStream rng(71, 0);
  Eigen::MatrixXd l(200, 5);
  for (int m = 0; m < 200; ++m)
    for (int i = 0; i < 5; ++i) l(m, i) = -2.0 + 0.3 * rng.normal();
  const CpoResult r = cpo(l);
  for (int i = 0; i < 5; ++i) {
    double direct = 0.0;
    for (int m = 0; m < 200; ++m) direct += 1.0 / std::exp(l(m, i));
    direct = 1.0 / (direct / 200.0);
    CHECK(r.log_cpo(i) == doctest::Approx(std::log(direct)).epsilon(1e-10));
  }
}

TEST_CASE("criteria identities") {
  // degenerate chain: pD = 0 exactly and DIC = D(theta_hat)
  RegressionData data;
  data.X = Eigen::MatrixXd::Ones(6, 1);
  data.y.resize(6);
  data.y << 0.1, -0.4, 1.2, 0.3, -0.8, 0.6;
  Eigen::VectorXd beta = Eigen::VectorXd::Constant(1, 0.2);
  const auto chains = degenerate_chain(Family::csn, beta, 1.1, 0.4, {}, 25);
  const Eigen::MatrixXd l = obs_loglik(chains, data);
  const CriteriaReport r = criteria(l, chains, data);
  CHECK(r.pD == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.DIC == doctest::Approx(r.EAIC - 2.0 * r.k).epsilon(1e-9));
  CHECK(r.k == 3);  // beta, sigma2, gamma
  // EBIC - EAIC = k (log n - 2) for arbitrary inputs
  CHECK(r.EBIC - r.EAIC ==
        doctest::Approx(r.k * (std::log(6.0) - 2.0)).epsilon(1e-12));
}

TEST_CASE("parameter counts per family") {
  CHECK(parameter_count(Family::csn, 2) == 4);
  CHECK(parameter_count(Family::cst, 2) == 5);
  CHECK(parameter_count(Family::css, 4) == 7);
  CHECK(parameter_count(Family::cscn, 2) == 6);
  CHECK(parameter_count(Family::csgt, 2) == 5);  // no free sigma2
}

TEST_CASE("kl influence and calibration") {
  // constant per-draw likelihood: K = 0 and p = 1/2
  Eigen::MatrixXd lc = Eigen::MatrixXd::Constant(30, 4, -2.2);
  const CpoResult rc = cpo(lc);
  const Eigen::VectorXd k = kl_influence(lc, rc);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(k(i)) < 1e-12);
    CHECK(calibrate(k(i)) == 0.5);
  }
  // cutoff reproduces p = 0.8
  CHECK(calibrate(0.2231435513) == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(calibrate(kKlInfluenceCutoff) == doctest::Approx(0.8).epsilon(1e-6));
  // K = 2 evaluates the closed form
  CHECK(calibrate(2.0) ==
        doctest::Approx(0.5 * (1.0 + std::sqrt(1.0 - std::exp(-4.0)))).epsilon(1e-12));
  // monotone, bounded
  double prev = 0.5;
  for (double kk : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(calibrate(kk) > prev);
    prev = calibrate(kk);
    CHECK(prev <= 1.0);
  }
  CHECK(calibrate(40.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kl influence is nonnegative up to Monte Carlo noise on a real fit") {
  RngStream rng(72, 0);
  RegressionData data;
  data.X = Eigen::MatrixXd::Ones(60, 1);
  CpParams truth;
  truth.family = Family::csn;
  truth.beta = Eigen::VectorXd::Constant(1, 1.0);
  truth.sigma2 = 1.0;
  truth.gamma = 0.4;
  data.y = simulate_response(data.X, truth, rng);
  SamplerConfig cfg;
  cfg.iterations = 2000;
  cfg.burn_in = 500;
  cfg.thin = 3;
  const auto chain = run_chain(data, Family::csn, PriorSpec{}, cfg);
  const Eigen::MatrixXd l = obs_loglik({chain}, data);
  const Eigen::VectorXd k = kl_influence(l, cpo(l));
  CHECK(k.minCoeff() > -0.01);
}

TEST_CASE("obs_loglik equals direct density evaluation and is repeatable") {
  RegressionData data;
  data.X.resize(3, 1);
  data.X << 1, 1, 1;
  data.y.resize(3);
  data.y << 0.2, -1.0, 0.9;
  const auto chains =
      degenerate_chain(Family::cst, Eigen::VectorXd::Constant(1, 0.1), 1.2, -0.5, {5.0}, 4);
  const Eigen::MatrixXd a = obs_loglik(chains, data);
  const Eigen::MatrixXd b = obs_loglik(chains, data);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CpParams p;
  p.family = Family::cst;
  p.beta = Eigen::VectorXd::Constant(1, 0.1);
  p.sigma2 = 1.2;
  p.gamma = -0.5;
  p.nu = {5.0};
  for (int i = 0; i < 3; ++i)
    CHECK(a(0, i) == doctest::Approx(log_pdf(data.y(i), p)).epsilon(1e-12));
}

TEST_CASE("residuals: perfect fit gives zeros; scaling by sigma_hat") {
  RegressionData data;
  data.X.resize(4, 2);
  data.X << 1, 0.5, 1, -0.2, 1, 1.0, 1, 0.0;
  Eigen::VectorXd beta(2);
  beta << 0.3, 1.2;
  data.y = data.X * beta;
  const Eigen::VectorXd r = residuals(data, beta, 2.0);
  CHECK(r.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  data.y(2) += 3.0;
  CHECK(residuals(data, beta, 4.0)(2) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(residuals(data, beta, 0.0), ParameterError);
}

TEST_CASE("qq envelope: band shape, outside counting, coverage on a true law") {
  RngStream rng(73, 0);
  CpParams law;
  law.family = Family::csn;
  law.beta = Eigen::VectorXd::Zero(1);
  law.sigma2 = 1.0;
  law.gamma = 0.5;

  // residual set drawn from the very law used for the bands: nearly all
  // points must stay inside the 95% band
  Eigen::VectorXd resid(300);
  for (int i = 0; i < 300; ++i) resid(i) = sample_csmsn(law, rng);
  const EnvelopeTable t = qq_envelope(resid, law, 100, rng);
  REQUIRE(t.observed.size() == 300);
  for (int i = 0; i + 1 < 300; ++i) CHECK(t.observed(i) <= t.observed(i + 1));
  for (int i = 0; i < 300; ++i) {
    CHECK(t.lo(i) <= t.mid(i));
    CHECK(t.mid(i) <= t.hi(i));
  }
  CHECK(t.outside() <= 21);  // 93% of 300

  // a gross mean shift must be flagged
  Eigen::VectorXd shifted = resid.array() + 3.0;
  const EnvelopeTable bad = qq_envelope(shifted, law, 100, rng);
  CHECK(bad.outside() > 50);
}

TEST_CASE("fitted_residual_law nudges estimates inside the legal domain") {
  const CpParams a = fitted_residual_law(Family::cst, 1.2, {1.9});
  CHECK(std::abs(a.gamma) < constants().gamma_max);
  CHECK(a.nu[0] > 2.0);
  const CpParams b = fitted_residual_law(Family::cscn, -0.2, {1.3, -0.1});
  CHECK(b.nu[0] < 1.0);
  CHECK(b.nu[1] > 0.0);
  CHECK_NOTHROW(validate(a));
  CHECK_NOTHROW(validate(b));
}
