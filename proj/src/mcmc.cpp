#include "csmsn/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csmsn/densities.hpp"
#include "csmsn/errors.hpp"
#include "csmsn/parallel.hpp"
#include "csmsn/special.hpp"

namespace csmsn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void PriorSpec::resolve(int p) {
  if (mu_beta.size() == 0) mu_beta = Eigen::VectorXd::Zero(p);
  if (Sigma_beta.size() == 0)
    Sigma_beta = 100.0 * Eigen::MatrixXd::Identity(p, p);
}

void PriorSpec::validate(int p) const {
  if (mu_beta.size() != p || Sigma_beta.rows() != p || Sigma_beta.cols() != p)
    throw ConfigError("beta prior dimensions do not match the design matrix");
  Eigen::LLT<Eigen::MatrixXd> llt(Sigma_beta);
  if (llt.info() != Eigen::Success)
    throw ConfigError("Sigma_beta must be positive definite");
  if (!(sigma2_Delta > 0.0)) throw ConfigError("sigma2_Delta must be positive");
  if (!(c > 0.0 && d > 0.0)) throw ConfigError("tau^-1 prior needs c, d > 0");
  if (!(0.0 < cst_rho0 && cst_rho0 < cst_rho1))
    throw ConfigError("cst hyper bounds need 0 < rho0 < rho1");
  if (!(0.0 < csgt_rho0 && csgt_rho0 < csgt_rho1) ||
      !(0.0 < csgt_psi0 && csgt_psi0 < csgt_psi1))
    throw ConfigError("csgt hyper bounds need 0 < rho0 < rho1 and 0 < psi0 < psi1");
  if (!(css_alpha1 > 0.0)) throw ConfigError("css_alpha1 must be positive");
  if (css_alpha2 && !(*css_alpha2 > 0.0))
    throw ConfigError("css_alpha2 must be positive when fixed");
  if (!(0.0 < css_theta_lo && css_theta_lo < css_theta_hi))
    throw ConfigError("css theta bounds need 0 < lo < hi");
  if (!(cscn_alpha1 > 0.0 && cscn_beta1 > 0.0 && cscn_alpha2 > 0.0 && cscn_beta2 > 0.0))
    throw ConfigError("cscn beta-prior hyperparameters must be positive");
}

void SamplerConfig::validate() const {
  if (!(burn_in >= 0 && burn_in < iterations))
    throw ConfigError("need 0 <= burn_in < iterations");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (n_chains < 1) throw ConfigError("n_chains must be >= 1");
  if (retained() < 1) throw ConfigError("no draws would be retained");
}

Eigen::Index Chain::col(const std::string& name) const {
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(columns.size()); ++j)
    if (columns[j] == name) return j;
  throw DataError("chain has no column named '" + name + "'");
}

// ---------------------------------------------------------------- kernels

MvnParams beta_conditional(const RegressionData& data, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& h, double Delta, double tau,
                           const PriorSpec& prior) {
  const int p = static_cast<int>(data.X.cols());
  const double b = constants().b;
  Eigen::MatrixXd prec = prior.Sigma_beta.llt().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::VectorXd rhs = prec * prior.mu_beta;
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    const Eigen::VectorXd xi = data.X.row(i).transpose();
    prec.noalias() += (u(i) / tau) * xi * xi.transpose();
    const double yi_adj = data.y(i) - Delta / std::sqrt(u(i)) * (h(i) - b);
    rhs.noalias() += (u(i) / tau) * yi_adj * xi;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success)
    throw NumericError("beta conditional precision is not positive definite");
  MvnParams out;
  out.cov = llt.solve(Eigen::MatrixXd::Identity(p, p));
  out.mean = llt.solve(rhs);
  return out;
}

NormalParams h_conditional(double resid, double u, double Delta, double tau) {
  const double b = constants().b;
  const double denom = Delta * Delta + tau;
  return {(Delta * Delta * b + Delta * std::sqrt(u) * resid) / denom, tau / denom};
}

NormalParams Delta_conditional(const Eigen::VectorXd& resid, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& h, double tau,
                               const PriorSpec& prior) {
  const double b = constants().b;
  double s_hb2 = 0.0, s_cross = 0.0;
  for (Eigen::Index i = 0; i < resid.size(); ++i) {
    const double hb = h(i) - b;
    s_hb2 += hb * hb;
    s_cross += hb * std::sqrt(u(i)) * resid(i);
  }
  const double denom = prior.sigma2_Delta * s_hb2 + tau;
  return {(prior.sigma2_Delta * s_cross + prior.mu_Delta * tau) / denom,
          tau * prior.sigma2_Delta / denom};
}

GammaParams tau_inv_conditional(const Eigen::VectorXd& resid, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& h, double Delta,
                                const PriorSpec& prior) {
  const double b = constants().b;
  double rate = prior.d;
  for (Eigen::Index i = 0; i < resid.size(); ++i) {
    const double e = resid(i) - Delta / std::sqrt(u(i)) * (h(i) - b);
    rate += 0.5 * u(i) * e * e;
  }
  return {0.5 * static_cast<double>(resid.size()) + prior.c, rate};
}

GammaParams css_nu_conditional(const Eigen::VectorXd& u, double alpha1, double alpha2) {
  double sum_log = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum_log += std::log(u(i));
  const double rate = alpha2 - sum_log;
  // u_i < 1 makes every -log(u_i) positive, so the rate stays positive.
  if (!(rate > 0.0)) throw NumericError("css nu conditional rate not positive");
  return {static_cast<double>(u.size()) + alpha1, rate};
}

BetaParams cscn_nu1_conditional(int n_contaminated, int n, const PriorSpec& prior) {
  return {n_contaminated + prior.cscn_alpha1, n - n_contaminated + prior.cscn_beta1};
}

GammaParams csgt_nu2_conditional(int n, double nu1, double sum_u, double lambda2) {
  return {0.5 * n * nu1 + 1.0, 0.5 * sum_u + lambda2};
}

GammaParams cst_lambda_conditional(double nu) { return {2.0, std::max(nu - 2.0, 1e-12)}; }
GammaParams css_theta_conditional(double nu) { return {2.0, std::max(nu - 1.0, 1e-12)}; }
GammaParams csgt_lambda2_conditional(double nu2) { return {2.0, nu2}; }

double cscn_u_prob_contaminated(double resid, double h, double Delta, double tau,
                                double nu1, double nu2) {
  const double b = constants().b;
  const double hb = h - b;
  const double log_p = std::log(nu1) + 0.5 * std::log(nu2) -
                       (nu2 / (2.0 * tau)) *
                           (resid * resid - 2.0 * Delta / std::sqrt(nu2) * hb * resid);
  const double log_q =
      std::log1p(-nu1) - (1.0 / (2.0 * tau)) * (resid * resid - 2.0 * Delta * hb * resid);
  return 1.0 / (1.0 + std::exp(log_q - log_p));
}

double log_kernel_u_cst(double u, double resid, double h, double Delta, double tau,
                        double nu) {
  if (!(u > 0.0)) return -kInf;
  const double b = constants().b;
  return (0.5 * (nu + 1.0) - 1.0) * std::log(u) -
         0.5 * u * (resid * resid / tau + nu) +
         std::sqrt(u) * Delta / tau * (h - b) * resid;
}

double log_kernel_u_csgt(double u, double resid, double h, double Delta, double tau,
                         double nu1, double nu2) {
  if (!(u > 0.0)) return -kInf;
  const double b = constants().b;
  return (0.5 * (nu1 + 1.0) - 1.0) * std::log(u) -
         0.5 * u * (resid * resid / tau + nu2) +
         std::sqrt(u) * Delta / tau * (h - b) * resid;
}

double log_kernel_u_css(double u, double resid, double h, double Delta, double tau,
                        double nu) {
  if (!(u > 0.0 && u < 1.0)) return -kInf;
  const double b = constants().b;
  return (nu + 0.5 - 1.0) * std::log(u) - 0.5 * u * resid * resid / tau +
         std::sqrt(u) * Delta / tau * (h - b) * resid;
}

double log_kernel_nu_cst(double nu, int n, double sum_u, double sum_log_u,
                         double lambda) {
  if (!(nu > 2.0)) return -kInf;
  const double half = 0.5 * nu;
  return n * (half * std::log(half) - log_gamma(half)) +
         (half - 1.0) * sum_log_u - nu * (0.5 * sum_u + lambda);
}

double log_kernel_nu1_csgt(double nu1, int n, double nu2, double sum_u,
                           double sum_log_u, double lambda1) {
  (void)sum_u;  // enters through the nu2 block, not this kernel
  if (!(nu1 > 2.0)) return -kInf;
  const double half = 0.5 * nu1;
  return n * half * std::log(0.5 * nu2) - n * log_gamma(half) +
         (half - 1.0) * sum_log_u - lambda1 * (nu1 - 2.0);
}

double log_kernel_nu2_cscn(double nu2, int n_contaminated, double sum_r2,
                           double sum_hr, double tau, const PriorSpec& prior) {
  // sum_r2 and sum_hr run over the contaminated observations only:
  // sum_r2 = sum resid^2, sum_hr = Delta * sum (h-b) resid. The Gaussian
  // factors enter because u_i = nu2 for those observations.
  if (!(nu2 > 0.0 && nu2 < 1.0)) return -kInf;
  return 0.5 * n_contaminated * std::log(nu2) -
         (nu2 * sum_r2 - 2.0 * std::sqrt(nu2) * sum_hr) / (2.0 * tau) +
         (prior.cscn_alpha2 - 1.0) * std::log(nu2) +
         (prior.cscn_beta2 - 1.0) * std::log1p(-nu2);
}

double log_kernel_delta_csgt(double delta, int n, double sum_urr, double sum_sur,
                             double sum_hb2) {
  if (!(delta > -1.0 && delta < 1.0)) return -kInf;
  const double b2 = constants().b2;
  const double a = 1.0 - b2 * delta * delta;  // 1 - b^2 delta^2
  const double c = 1.0 - delta * delta;
  const double quad =
      sum_urr - 2.0 * delta / std::sqrt(a) * sum_sur + delta * delta / a * sum_hb2;
  return 0.5 * n * (std::log(a) - std::log(c)) - 0.5 * (a / c) * quad;
}

void StepAdapter::update(double accept_prob) {
  if (frozen_) return;
  ++count_;
  log_step_ += (accept_prob - target_) / std::pow(static_cast<double>(count_), 0.6);
  log_step_ = std::clamp(log_step_, -10.0, 5.0);
}

// ---------------------------------------------------------------- sampler

namespace {

Eigen::VectorXd draw_mvn(const MvnParams& par, RngStream& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(par.cov);
  if (llt.info() != Eigen::Success)
    throw NumericError("mvn draw: covariance not positive definite");
  Eigen::VectorXd z(par.mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return par.mean + llt.matrixL() * z;
}

struct Sampler {
  const RegressionData& data;
  Family family;
  const PriorSpec& prior;
  const SamplerConfig& config;
  RngStream rng;

  int n, p;
  Eigen::VectorXd beta, resid;
  double Delta = 0.0, tau = 1.0, delta_gt = 0.0;
  std::vector<double> nu;
  LatentState lat;

  StepAdapter adapt_u, adapt_nu, adapt_nu2, adapt_delta;
  std::map<std::string, AcceptanceStat> ledger;
  bool sampling_phase = false;

  Sampler(const RegressionData& d, Family f, const PriorSpec& pr,
          const SamplerConfig& cfg, int chain_id)
      : data(d),
        family(f),
        prior(pr),
        config(cfg),
        rng(cfg.seed, static_cast<std::uint64_t>(chain_id)),
        adapt_u(0.8, cfg.target_accept),
        adapt_nu(0.8, cfg.target_accept),
        adapt_nu2(0.8, cfg.target_accept),
        adapt_delta(0.5, cfg.target_accept) {
    n = static_cast<int>(data.X.rows());
    p = static_cast<int>(data.X.cols());
    init();
  }

  void init() {
    // Moment-matched start: OLS for beta/tau, Delta = 0, h at its prior mean,
    // no contamination, shapes at their prior medians.
    beta = data.X.colPivHouseholderQr().solve(data.y);
    resid = data.y - data.X * beta;
    tau = std::max(resid.squaredNorm() / std::max(n - p, 1), 1e-8);
    Delta = 0.0;
    lat.h = Eigen::VectorXd::Constant(n, constants().b);
    lat.u = Eigen::VectorXd::Ones(n);
    switch (family) {
      case Family::csn: break;
      case Family::cst: {
        const double lambda = 0.5 * (prior.cst_rho0 + prior.cst_rho1);
        lat.hyper = {lambda};
        nu = {2.0 + kLogTwo / lambda};
        break;
      }
      case Family::css: {
        const double theta = prior.css_alpha2
                                 ? *prior.css_alpha2
                                 : 0.5 * (prior.css_theta_lo + prior.css_theta_hi);
        if (!prior.css_alpha2) lat.hyper = {theta};
        nu = {1.0 + kLogTwo / theta};
        break;
      }
      case Family::cscn:
        nu = {0.5, 0.5};
        lat.contaminated.assign(n, 0);
        break;
      case Family::csgt: {
        const double l1 = 0.5 * (prior.csgt_rho0 + prior.csgt_rho1);
        const double l2 = 0.5 * (prior.csgt_psi0 + prior.csgt_psi1);
        lat.hyper = {l1, l2};
        const double nu1 = 2.0 + kLogTwo / l1;
        // sigma is pinned at 1, so the response scale has to flow through
        // nu2; start it at the moment-matched value rather than the prior
        // median.
        nu = {nu1, std::max(tau * (nu1 - 2.0), 0.1)};
        delta_gt = 0.0;
        std::tie(Delta, tau) = delta_to_work_csgt(delta_gt);
        break;
      }
    }
  }

  void record(const std::string& block, bool accepted, double step) {
    auto& st = ledger[block];
    st.step = step;
    if (!sampling_phase) return;
    ++st.proposals;
    if (accepted) ++st.accepts;
  }

  void update_beta() {
    beta = draw_mvn(beta_conditional(data, lat.u, lat.h, Delta, tau, prior), rng);
    resid = data.y - data.X * beta;
  }

  void update_h() {
    for (int i = 0; i < n; ++i) {
      const NormalParams par = h_conditional(resid(i), lat.u(i), Delta, tau);
      lat.h(i) = sample_truncated_normal(par.mean, par.variance, 0.0, kInf, rng);
    }
  }

  void update_u() {
    if (family == Family::csn) return;
    if (family == Family::cscn) {
      for (int i = 0; i < n; ++i) {
        const double pc =
            cscn_u_prob_contaminated(resid(i), lat.h(i), Delta, tau, nu[0], nu[1]);
        lat.contaminated[i] = rng.uniform() < pc ? 1 : 0;
        lat.u(i) = lat.contaminated[i] ? nu[1] : 1.0;
      }
      return;
    }
    // Random-walk MH per observation: log u for cst/csgt, logit u for css.
    const double step = adapt_u.step();
    const bool logit_scale = (family == Family::css);
    double mean_ap = 0.0;
    long acc = 0;
    for (int i = 0; i < n; ++i) {
      const double u = lat.u(i);
      const double x = logit_scale ? std::log(u / (1.0 - u)) : std::log(u);
      const double xp = x + step * rng.normal();
      const double up = logit_scale ? 1.0 / (1.0 + std::exp(-xp)) : std::exp(xp);
      double lr = logit_scale
                      ? log_kernel_u_css(up, resid(i), lat.h(i), Delta, tau, nu[0]) -
                            log_kernel_u_css(u, resid(i), lat.h(i), Delta, tau, nu[0]) +
                            std::log(up * (1.0 - up)) - std::log(u * (1.0 - u))
                      : 0.0;
      if (!logit_scale) {
        lr = (family == Family::cst
                  ? log_kernel_u_cst(up, resid(i), lat.h(i), Delta, tau, nu[0]) -
                        log_kernel_u_cst(u, resid(i), lat.h(i), Delta, tau, nu[0])
                  : log_kernel_u_csgt(up, resid(i), lat.h(i), Delta, tau, nu[0], nu[1]) -
                        log_kernel_u_csgt(u, resid(i), lat.h(i), Delta, tau, nu[0],
                                          nu[1])) +
             std::log(up) - std::log(u);
      }
      const double ap = std::min(1.0, std::exp(std::min(lr, 0.0)));
      mean_ap += ap;
      if (std::log(rng.uniform()) < lr) {
        lat.u(i) = up;
        ++acc;
      }
    }
    adapt_u.update(mean_ap / n);
    if (sampling_phase) {
      auto& st = ledger["u"];
      st.proposals += n;
      st.accepts += acc;
      st.step = step;
    } else {
      ledger["u"].step = step;
    }
  }

  void update_Delta_tau() {
    const NormalParams dp = Delta_conditional(resid, lat.u, lat.h, tau, prior);
    Delta = dp.mean + std::sqrt(dp.variance) * rng.normal();
    const GammaParams gp = tau_inv_conditional(resid, lat.u, lat.h, Delta, prior);
    tau = 1.0 / rng.gamma(gp.shape, gp.rate);
  }

  void update_delta_csgt() {
    double s_urr = 0.0, s_sur = 0.0, s_hb2 = 0.0;
    const double b = constants().b;
    for (int i = 0; i < n; ++i) {
      const double hb = lat.h(i) - b;
      s_urr += lat.u(i) * resid(i) * resid(i);
      s_sur += std::sqrt(lat.u(i)) * resid(i) * hb;
      s_hb2 += hb * hb;
    }
    const double step = adapt_delta.step();
    const double x = std::atanh(delta_gt);
    const double xp = x + step * rng.normal();
    const double dp = std::tanh(xp);
    // Jacobian of delta = tanh(x): d delta/dx = 1 - delta^2.
    const double lr = log_kernel_delta_csgt(dp, n, s_urr, s_sur, s_hb2) -
                      log_kernel_delta_csgt(delta_gt, n, s_urr, s_sur, s_hb2) +
                      std::log1p(-dp * dp) - std::log1p(-delta_gt * delta_gt);
    const bool accept = std::log(rng.uniform()) < lr;
    if (accept) {
      delta_gt = dp;
      std::tie(Delta, tau) = delta_to_work_csgt(delta_gt);
    }
    adapt_delta.update(std::min(1.0, std::exp(std::min(lr, 0.0))));
    record("delta", accept, step);
  }

  void update_nu() {
    switch (family) {
      case Family::csn: return;
      case Family::cst: {
        double sum_u = 0.0, sum_log_u = 0.0;
        for (int i = 0; i < n; ++i) {
          sum_u += lat.u(i);
          sum_log_u += std::log(lat.u(i));
        }
        const double step = adapt_nu.step();
        const double x = std::log(nu[0] - 2.0);
        const double xp = x + step * rng.normal();
        const double nup = 2.0 + std::exp(xp);
        const double lr =
            log_kernel_nu_cst(nup, n, sum_u, sum_log_u, lat.hyper[0]) -
            log_kernel_nu_cst(nu[0], n, sum_u, sum_log_u, lat.hyper[0]) + xp - x;
        const bool accept = std::log(rng.uniform()) < lr;
        if (accept) nu[0] = nup;
        adapt_nu.update(std::min(1.0, std::exp(std::min(lr, 0.0))));
        record("nu", accept, step);
        const GammaParams lp = cst_lambda_conditional(nu[0]);
        lat.hyper[0] = sample_truncated_gamma(lp.shape, lp.rate, prior.cst_rho0,
                                              prior.cst_rho1, rng);
        return;
      }
      case Family::css: {
        const double alpha2 = prior.css_alpha2 ? *prior.css_alpha2 : lat.hyper[0];
        const GammaParams gp = css_nu_conditional(lat.u, prior.css_alpha1, alpha2);
        nu[0] = sample_truncated_gamma(gp.shape, gp.rate, 1.0, kInf, rng);
        if (!prior.css_alpha2) {
          const GammaParams tp = css_theta_conditional(nu[0]);
          lat.hyper[0] = sample_truncated_gamma(tp.shape, tp.rate, prior.css_theta_lo,
                                                prior.css_theta_hi, rng);
        }
        return;
      }
      case Family::cscn: {
        int m = 0;
        double sum_r2 = 0.0, sum_hr = 0.0;
        const double b = constants().b;
        for (int i = 0; i < n; ++i) {
          if (!lat.contaminated[i]) continue;
          ++m;
          sum_r2 += resid(i) * resid(i);
          sum_hr += (lat.h(i) - b) * resid(i);
        }
        sum_hr *= Delta;
        const BetaParams bp = cscn_nu1_conditional(m, n, prior);
        nu[0] = rng.beta(bp.a, bp.b);
        const double step = adapt_nu2.step();
        const double x = std::log(nu[1] / (1.0 - nu[1]));
        const double xp = x + step * rng.normal();
        const double nup = 1.0 / (1.0 + std::exp(-xp));
        const double lr = log_kernel_nu2_cscn(nup, m, sum_r2, sum_hr, tau, prior) -
                          log_kernel_nu2_cscn(nu[1], m, sum_r2, sum_hr, tau, prior) +
                          std::log(nup * (1.0 - nup)) - std::log(nu[1] * (1.0 - nu[1]));
        const bool accept = std::log(rng.uniform()) < lr;
        if (accept) nu[1] = nup;
        adapt_nu2.update(std::min(1.0, std::exp(std::min(lr, 0.0))));
        record("nu2", accept, step);
        for (int i = 0; i < n; ++i)
          if (lat.contaminated[i]) lat.u(i) = nu[1];
        return;
      }
      case Family::csgt: {
        double sum_u = 0.0, sum_log_u = 0.0;
        for (int i = 0; i < n; ++i) {
          sum_u += lat.u(i);
          sum_log_u += std::log(lat.u(i));
        }
        const double step = adapt_nu.step();
        const double x = std::log(nu[0] - 2.0);
        const double xp = x + step * rng.normal();
        const double nup = 2.0 + std::exp(xp);
        const double lr =
            log_kernel_nu1_csgt(nup, n, nu[1], sum_u, sum_log_u, lat.hyper[0]) -
            log_kernel_nu1_csgt(nu[0], n, nu[1], sum_u, sum_log_u, lat.hyper[0]) + xp -
            x;
        const bool accept = std::log(rng.uniform()) < lr;
        if (accept) nu[0] = nup;
        adapt_nu.update(std::min(1.0, std::exp(std::min(lr, 0.0))));
        record("nu1", accept, step);

        const GammaParams l1 = cst_lambda_conditional(nu[0]);
        lat.hyper[0] = sample_truncated_gamma(l1.shape, l1.rate, prior.csgt_rho0,
                                              prior.csgt_rho1, rng);
        const GammaParams g2 = csgt_nu2_conditional(n, nu[0], sum_u, lat.hyper[1]);
        nu[1] = rng.gamma(g2.shape, g2.rate);
        const GammaParams l2 = csgt_lambda2_conditional(nu[1]);
        lat.hyper[1] = sample_truncated_gamma(l2.shape, l2.rate, prior.csgt_psi0,
                                              prior.csgt_psi1, rng);
        return;
      }
    }
  }

  void sweep() {
    update_beta();
    update_h();
    update_u();
    if (family == Family::csgt)
      update_delta_csgt();
    else
      update_Delta_tau();
    update_nu();
  }

  void check_finite(long iteration) const {
    bool ok = beta.allFinite() && std::isfinite(Delta) && tau > 0.0 &&
              std::isfinite(tau);
    for (double v : nu) ok = ok && std::isfinite(v);
    if (!ok)
      throw NumericError("non-finite state in Gibbs sweep at iteration " +
                         std::to_string(iteration));
  }

  void freeze_adaptation() {
    adapt_u.freeze();
    adapt_nu.freeze();
    adapt_nu2.freeze();
    adapt_delta.freeze();
  }
};

std::vector<std::string> chain_columns(Family family, int p) {
  std::vector<std::string> cols;
  for (int j = 0; j < p; ++j) cols.push_back("beta" + std::to_string(j));
  cols.insert(cols.end(), {"Delta", "tau", "delta", "sigma2", "gamma"});
  switch (family) {
    case Family::csn: break;
    case Family::cst: cols.insert(cols.end(), {"nu", "lambda_nu"}); break;
    case Family::css: cols.insert(cols.end(), {"nu", "theta_nu"}); break;
    case Family::cscn: cols.insert(cols.end(), {"nu1", "nu2"}); break;
    case Family::csgt:
      cols.insert(cols.end(), {"nu1", "nu2", "lambda_nu1", "lambda_nu2"});
      break;
  }
  return cols;
}

}  // namespace

Chain run_chain(const RegressionData& data, Family family, const PriorSpec& prior,
                const SamplerConfig& config, int chain_id) {
  config.validate();
  const int n = static_cast<int>(data.X.rows());
  const int p = static_cast<int>(data.X.cols());
  if (data.y.size() != n) throw DataError("y length does not match X rows");
  if (n < p) throw DataError("need at least as many observations as coefficients");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(data.X);
  if (qr.rank() < p) throw DataError("design matrix is rank deficient");
  PriorSpec pr = prior;
  pr.resolve(p);
  pr.validate(p);

  Sampler s(data, family, pr, config, chain_id);
  const long adapt_until = config.adapt_window > 0
                               ? std::min(config.adapt_window, config.burn_in)
                               : config.burn_in;

  Chain chain;
  chain.family = family;
  chain.columns = chain_columns(family, p);
  chain.draws.resize(config.retained(), static_cast<Eigen::Index>(chain.columns.size()));
  chain.config = config;
  chain.chain_id = chain_id;

  long row = 0;
  for (long it = 0; it < config.iterations; ++it) {
    if (it == adapt_until) s.freeze_adaptation();
    s.sampling_phase = it >= config.burn_in;
    s.sweep();
    s.check_finite(it);
    if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0 &&
        row < chain.draws.rows()) {
      Eigen::Index j = 0;
      for (int k = 0; k < p; ++k) chain.draws(row, j++) = s.beta(k);
      const double delta =
          (family == Family::csgt) ? s.delta_gt : s.Delta / std::sqrt(s.tau + s.Delta * s.Delta);
      const double sigma2 =
          (family == Family::csgt) ? 1.0 : s.tau + s.Delta * s.Delta * (1.0 - constants().b2);
      chain.draws(row, j++) = s.Delta;
      chain.draws(row, j++) = s.tau;
      chain.draws(row, j++) = delta;
      chain.draws(row, j++) = sigma2;
      chain.draws(row, j++) = gamma_from_delta(delta);
      for (double v : s.nu) chain.draws(row, j++) = v;
      if (family == Family::cst) chain.draws(row, j++) = s.lat.hyper[0];
      if (family == Family::css)
        chain.draws(row, j++) = pr.css_alpha2 ? *pr.css_alpha2 : s.lat.hyper[0];
      if (family == Family::csgt) {
        chain.draws(row, j++) = s.lat.hyper[0];
        chain.draws(row, j++) = s.lat.hyper[1];
      }
      ++row;
    }
  }
  chain.acceptance = s.ledger;
  return chain;
}

std::vector<Chain> run_chains(const RegressionData& data, Family family,
                              const PriorSpec& prior, const SamplerConfig& config) {
  std::vector<Chain> chains(config.n_chains);
  parallel_for(config.n_chains, [&](int c) {
    chains[c] = run_chain(data, family, prior, config, c);
  });
  return chains;
}

// ---------------------------------------------------------------- summaries

std::string stat_name(Stat s) {
  switch (s) {
    case Stat::mean: return "mean";
    case Stat::median: return "median";
    case Stat::mode: return "mode";
  }
  return "?";
}

double quantile(std::vector<double> x, double p) {
  if (x.empty()) throw DataError("quantile of empty sample");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - std::floor(h)) * (x[lo + 1] - x[lo]);
}

double kde_mode(const std::vector<double>& x) {
  if (x.empty()) throw DataError("mode of empty sample");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= std::max(n - 1.0, 1.0);
  const double sd = std::sqrt(var);
  if (!(sd > 0.0)) return x.front();
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  const double bw = 0.9 * spread * std::pow(n, -0.2);

  const double lo = sorted.front() - bw, hi = sorted.back() + bw;
  const int grid = 512;
  double best_x = sorted.front(), best_f = -1.0;
  for (int g = 0; g < grid; ++g) {
    const double t = lo + (hi - lo) * g / (grid - 1);
    double f = 0.0;
    for (double v : x) {
      const double z = (t - v) / bw;
      f += std::exp(-0.5 * z * z);
    }
    if (f > best_f) {
      best_f = f;
      best_x = t;
    }
  }
  return best_x;
}

Stat default_stat(Family family, const std::string& column) {
  const bool is_beta = column.rfind("beta", 0) == 0;
  if (is_beta) return Stat::median;
  if (column == "sigma2") return Stat::mean;
  if (column == "delta" || column == "gamma") {
    switch (family) {
      case Family::css: return Stat::mean;
      case Family::cscn: return Stat::mode;
      default: return Stat::median;  // cst, csgt, csn
    }
  }
  if (column == "nu" || column == "nu1") {
    switch (family) {
      case Family::cst:
      case Family::css: return Stat::mode;
      case Family::cscn: return Stat::mean;
      case Family::csgt: return Stat::median;
      default: return Stat::mean;
    }
  }
  if (column == "nu2")
    return family == Family::cscn ? Stat::mode : Stat::median;
  return Stat::mean;
}

Eigen::MatrixXd pooled_draws(const std::vector<Chain>& chains) {
  if (chains.empty()) throw DataError("no chains to pool");
  Eigen::Index rows = 0;
  for (const auto& c : chains) {
    if (c.columns != chains.front().columns)
      throw DataError("chains have mismatched columns");
    rows += c.draws.rows();
  }
  Eigen::MatrixXd out(rows, chains.front().draws.cols());
  Eigen::Index at = 0;
  for (const auto& c : chains) {
    out.middleRows(at, c.draws.rows()) = c.draws;
    at += c.draws.rows();
  }
  return out;
}

std::vector<ParamSummary> summarize(const std::vector<Chain>& chains,
                                    const SummaryPolicy& policy) {
  if (chains.empty() || chains.front().draws.rows() == 0)
    throw DataError("summarize: empty chain");
  const auto& cols = chains.front().columns;
  const Eigen::MatrixXd draws = pooled_draws(chains);
  std::vector<ParamSummary> out;
  out.reserve(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::vector<double> x(draws.rows());
    for (Eigen::Index i = 0; i < draws.rows(); ++i) x[i] = draws(i, static_cast<Eigen::Index>(j));
    ParamSummary s;
    s.name = cols[j];
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= std::max<double>(static_cast<double>(x.size()) - 1.0, 1.0);
    s.mean = mean;
    s.sd = std::sqrt(var);
    s.median = quantile(x, 0.5);
    s.mode = kde_mode(x);
    s.ci_lower = quantile(x, 0.025);
    s.ci_upper = quantile(x, 0.975);
    auto it = policy.overrides.find(cols[j]);
    s.statistic = it != policy.overrides.end()
                      ? it->second
                      : default_stat(chains.front().family, cols[j]);
    switch (s.statistic) {
      case Stat::mean: s.estimate = s.mean; break;
      case Stat::median: s.estimate = s.median; break;
      case Stat::mode: s.estimate = s.mode; break;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ParamSummary> summarize(const Chain& chain, const SummaryPolicy& policy) {
  return summarize(std::vector<Chain>{chain}, policy);
}

}  // namespace csmsn
