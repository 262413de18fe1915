#include "csmsn/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "csmsn/densities.hpp"
#include "csmsn/errors.hpp"
#include "csmsn/parallel.hpp"
#include "csmsn/random.hpp"
#include "csmsn/special.hpp"

namespace csmsn {

namespace {

CpParams params_from_row(const Chain& chain, const Eigen::RowVectorXd& row, int p) {
  CpParams par;
  par.family = chain.family;
  par.beta.resize(p);
  for (int j = 0; j < p; ++j) par.beta(j) = row(chain.col("beta" + std::to_string(j)));
  par.sigma2 = row(chain.col("sigma2"));
  par.gamma = row(chain.col("gamma"));
  switch (chain.family) {
    case Family::csn: break;
    case Family::cst:
    case Family::css: par.nu = {row(chain.col("nu"))}; break;
    case Family::cscn:
    case Family::csgt: par.nu = {row(chain.col("nu1")), row(chain.col("nu2"))}; break;
  }
  return par;
}

}  // namespace

Eigen::MatrixXd obs_loglik(const std::vector<Chain>& chains,
                           const RegressionData& data) {
  if (chains.empty()) throw DataError("obs_loglik: no chains");
  const int p = static_cast<int>(data.X.cols());
  const Eigen::MatrixXd draws = pooled_draws(chains);
  const Eigen::Index M = draws.rows();
  const Eigen::Index n = data.y.size();
  Eigen::MatrixXd l(M, n);
  const Chain& proto = chains.front();
  parallel_for(static_cast<int>(M), [&](int m) {
    const CpParams par = params_from_row(proto, draws.row(m), p);
    const CpDensity den(par);
    const Eigen::VectorXd mu = data.X * par.beta;
    for (Eigen::Index i = 0; i < n; ++i) l(m, i) = den.log_pdf_at(data.y(i), mu(i));
  });
  if (!l.allFinite()) throw NumericError("obs_loglik produced non-finite values");
  return l;
}

CpoResult cpo(const Eigen::MatrixXd& loglik) {
  const Eigen::Index M = loglik.rows(), n = loglik.cols();
  if (M < 1) throw DataError("cpo: need at least one draw");
  CpoResult out;
  out.log_cpo.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // log CPO_i = log M - logsumexp_m(-l_mi)
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < M; ++m) mx = std::max(mx, -loglik(m, i));
    double acc = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) acc += std::exp(-loglik(m, i) - mx);
    if (!std::isfinite(acc))
      throw NumericError("cpo: inverse-likelihood overflow after max-shift");
    out.log_cpo(i) = std::log(static_cast<double>(M)) - (mx + std::log(acc));
  }
  out.lpml = out.log_cpo.sum();
  return out;
}

int parameter_count(Family family, int p) {
  const int sigma = family == Family::csgt ? 0 : 1;
  return p + sigma + 1 + shape_dim(family);
}

CriteriaReport criteria(const Eigen::MatrixXd& loglik,
                        const std::vector<Chain>& chains,
                        const RegressionData& data) {
  const Eigen::Index M = loglik.rows();
  if (M < 1) throw DataError("criteria: need draws");
  const int p = static_cast<int>(data.X.cols());
  const Eigen::MatrixXd draws = pooled_draws(chains);

  // Posterior mean of each column gives theta_bar on the centered scale.
  const Eigen::RowVectorXd col_means = draws.colwise().mean();
  const CpParams theta_bar = params_from_row(chains.front(), col_means, p);

  const double d_bar = -2.0 * loglik.sum() / static_cast<double>(M);
  const double d_hat = -2.0 * log_likelihood(data.y, data.X, theta_bar);

  CriteriaReport r;
  r.k = parameter_count(chains.front().family, p);
  r.n = static_cast<int>(data.y.size());
  r.pD = d_bar - d_hat;
  r.DIC = d_hat + 2.0 * r.pD;
  r.EAIC = d_hat + 2.0 * r.k;
  r.EBIC = d_hat + r.k * std::log(static_cast<double>(r.n));
  r.LPML = cpo(loglik).lpml;
  return r;
}

Eigen::VectorXd kl_influence(const Eigen::MatrixXd& loglik, const CpoResult& cpo) {
  const Eigen::VectorXd mean_l = loglik.colwise().mean();
  return mean_l - cpo.log_cpo;
}

double calibrate(double kl) {
  if (kl <= 0.0) return 0.5;
  return 0.5 * (1.0 + std::sqrt(1.0 - std::exp(-2.0 * kl)));
}

Eigen::VectorXd residuals(const RegressionData& data, const Eigen::VectorXd& beta_hat,
                          double sigma2_hat) {
  if (!(sigma2_hat > 0.0)) throw ParameterError("residuals: sigma2_hat must be positive");
  return (data.y - data.X * beta_hat) / std::sqrt(sigma2_hat);
}

int EnvelopeTable::outside() const {
  int count = 0;
  for (Eigen::Index i = 0; i < observed.size(); ++i)
    if (observed(i) < lo(i) || observed(i) > hi(i)) ++count;
  return count;
}

CpParams fitted_residual_law(Family family, double gamma_hat,
                             std::vector<double> nu_hat) {
  const double gmax = constants().gamma_max;
  CpParams law;
  law.family = family;
  law.beta = Eigen::VectorXd::Zero(1);
  law.sigma2 = 1.0;
  law.gamma = std::clamp(gamma_hat, -0.9999 * gmax, 0.9999 * gmax);
  switch (family) {
    case Family::csn: break;
    case Family::cst: nu_hat[0] = std::max(nu_hat[0], 2.0 + 1e-6); break;
    case Family::css: nu_hat[0] = std::max(nu_hat[0], 1.0 + 1e-6); break;
    case Family::cscn:
      nu_hat[0] = std::clamp(nu_hat[0], 1e-6, 1.0 - 1e-6);
      nu_hat[1] = std::clamp(nu_hat[1], 1e-6, 1.0 - 1e-6);
      break;
    case Family::csgt:
      nu_hat[0] = std::max(nu_hat[0], 2.0 + 1e-6);
      nu_hat[1] = std::max(nu_hat[1], 1e-6);
      break;
  }
  law.nu = std::move(nu_hat);
  return law;
}

EnvelopeTable qq_envelope(const Eigen::VectorXd& resid, const CpParams& fitted_law,
                          int n_sims, RngStream& rng) {
  validate(fitted_law);
  const Eigen::Index n = resid.size();
  EnvelopeTable t;
  t.observed = resid;
  std::sort(t.observed.data(), t.observed.data() + n);

  Eigen::MatrixXd sims(n_sims, n);
  for (int s = 0; s < n_sims; ++s) {
    std::vector<double> draw(n);
    for (Eigen::Index i = 0; i < n; ++i) draw[i] = sample_csmsn(fitted_law, rng);
    std::sort(draw.begin(), draw.end());
    for (Eigen::Index i = 0; i < n; ++i) sims(s, i) = draw[i];
  }
  t.lo.resize(n);
  t.mid.resize(n);
  t.hi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> order(n_sims);
    for (int s = 0; s < n_sims; ++s) order[s] = sims(s, i);
    t.lo(i) = quantile(order, 0.025);
    t.mid(i) = quantile(order, 0.5);
    t.hi(i) = quantile(order, 0.975);
  }
  return t;
}

}  // namespace csmsn
