#ifndef CSMSN_DIAGNOSTICS_HPP
#define CSMSN_DIAGNOSTICS_HPP

#include <Eigen/Dense>

#include "csmsn/mcmc.hpp"
#include "csmsn/params.hpp"
#include "csmsn/rng.hpp"

// Model comparison (CPO/LPML, DIC, EAIC, EBIC), Kullback-Leibler case-deletion
// influence with calibration, standardized residuals, and simulated
// QQ-envelope tables.

namespace csmsn {

// Per-draw, per-observation log likelihood l(theta^(m) | y_i) under the
// family's marginal pdf. Rows are retained draws (pooled over chains),
// columns observations. Parallelized over draws.
Eigen::MatrixXd obs_loglik(const std::vector<Chain>& chains,
                           const RegressionData& data);

struct CpoResult {
  Eigen::VectorXd log_cpo;  // harmonic-mean estimate, log domain
  double lpml;              // sum of log CPO_i
};
CpoResult cpo(const Eigen::MatrixXd& loglik);

struct CriteriaReport {
  double EAIC, EBIC, DIC, pD, LPML;
  int k;  // free parameter count of the family
  int n;
};

// k = p coefficients + sigma2 (except csgt) + gamma + dim(nu).
int parameter_count(Family family, int p);

// D(theta_bar) is evaluated at the posterior means of (beta, sigma2, gamma,
// nu) on the centered scale.
CriteriaReport criteria(const Eigen::MatrixXd& loglik,
                        const std::vector<Chain>& chains,
                        const RegressionData& data);

// K(P, P_(-i)) = -log CPO_i + mean_m l(theta^(m) | y_i).
Eigen::VectorXd kl_influence(const Eigen::MatrixXd& loglik, const CpoResult& cpo);

// p_i = 0.5 (1 + sqrt(1 - exp(-2K))); negative K (Monte Carlo noise) is
// treated as 0. An observation is flagged influential at p_i >= 0.8,
// equivalently K > K(Ber(1/2), Ber(0.8)) = 0.2231436...
double calibrate(double kl);
inline constexpr double kKlInfluenceCutoff = 0.2231435513;  // -log(4*0.8*0.2)/2

// Standardized residuals (y_i - x_i' beta_hat)/sigma_hat.
Eigen::VectorXd residuals(const RegressionData& data, const Eigen::VectorXd& beta_hat,
                          double sigma2_hat);

struct EnvelopeTable {
  Eigen::VectorXd observed;  // sorted residuals
  Eigen::VectorXd lo, mid, hi;  // 2.5/50/97.5% bands per order statistic
  int outside() const;  // observations outside [lo, hi]
};

// Bands from n_sims simulated residual sets drawn from the fitted
// standardized law (mu = 0, sigma2 = 1, gamma_hat, nu_hat).
EnvelopeTable qq_envelope(const Eigen::VectorXd& resid, const CpParams& fitted_law,
                          int n_sims, RngStream& rng);

// Standardized law (mu = 0, sigma2 = 1) from posterior point estimates,
// nudged inside the legal parameter domain (KDE modes can land a hair
// outside an open boundary).
CpParams fitted_residual_law(Family family, double gamma_hat,
                             std::vector<double> nu_hat);

}  // namespace csmsn

#endif
