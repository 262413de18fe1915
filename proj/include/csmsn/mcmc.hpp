#ifndef CSMSN_MCMC_HPP
#define CSMSN_MCMC_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csmsn/params.hpp"
#include "csmsn/random.hpp"
#include "csmsn/rng.hpp"

// Gibbs / Metropolis-within-Gibbs sampler for the CSMSN regression model.
// The sweep updates beta, h, u, Delta, tau^{-1} (or delta for csgt), the
// shape block and its hyper-rates. Closed-form conditionals are exposed as
// parameter-computing functions so they can be checked against independent
// oracles; MH blocks expose their log kernels for the same reason.

namespace csmsn {

struct RegressionData {
  Eigen::MatrixXd X;  // n x p design, intercept already included if wanted
  Eigen::VectorXd y;
};

struct PriorSpec {
  // beta ~ N(mu_beta, Sigma_beta); empty mu_beta means zeros / 100 I of the
  // right dimension, resolved at fit time.
  Eigen::VectorXd mu_beta;
  Eigen::MatrixXd Sigma_beta;
  double mu_Delta = 0.0;
  double sigma2_Delta = 100.0;
  double c = 0.01;  // tau^{-1} ~ gamma(c, d)
  double d = 0.01;

  // cst: nu | lambda ~ exp(lambda) I(2,inf), lambda ~ U(rho0, rho1)
  double cst_rho0 = 0.02;
  double cst_rho1 = 0.49;

  // css: nu ~ TG(alpha1, alpha2) I(1,inf). With the default alpha1 = 1 and
  // css_alpha2 unset, the rate is hierarchical: theta ~ U(theta_lo, theta_hi).
  double css_alpha1 = 1.0;
  std::optional<double> css_alpha2;  // set -> fixed rate, no hyper
  double css_theta_lo = 0.02;
  double css_theta_hi = 0.99;

  // cscn: nu1 ~ beta(alpha1, beta1), nu2 ~ beta(alpha2, beta2)
  double cscn_alpha1 = 1.0, cscn_beta1 = 1.0;
  double cscn_alpha2 = 1.0, cscn_beta2 = 1.0;

  // csgt: nu1 | lambda1 ~ exp(lambda1) I(2,inf), lambda1 ~ U(rho0, rho1);
  //       nu2 | lambda2 ~ exp(lambda2),          lambda2 ~ U(psi0, psi1)
  double csgt_rho0 = 0.02;
  double csgt_rho1 = 0.49;
  double csgt_psi0 = 0.02;
  double csgt_psi1 = 0.49;

  void resolve(int p);  // fill beta prior defaults for dimension p
  void validate(int p) const;
};

struct SamplerConfig {
  long iterations = 60000;
  long burn_in = 20000;
  long thin = 40;
  int n_chains = 1;
  std::uint64_t seed = 20240101;
  long adapt_window = 0;  // 0 means adapt through the whole burn-in
  double target_accept = 0.44;

  long retained() const { return (iterations - burn_in) / thin; }
  void validate() const;
};

struct LatentState {
  Eigen::VectorXd h;                  // half-normal latents, > 0
  Eigen::VectorXd u;                  // mixing values (css in (0,1), cscn in {nu2,1})
  std::vector<std::uint8_t> contaminated;  // cscn indicator backing u
  std::vector<double> hyper;          // cst: {lambda}; css: {theta}; csgt: {l1,l2}
};

struct AcceptanceStat {
  long proposals = 0;
  long accepts = 0;
  double step = 0.0;  // final proposal sd on the transformed scale
  double rate() const { return proposals ? double(accepts) / proposals : 0.0; }
};

struct Chain {
  Family family = Family::csn;
  std::vector<std::string> columns;
  Eigen::MatrixXd draws;  // retained x columns (WorkParams scale + derived)
  std::map<std::string, AcceptanceStat> acceptance;
  SamplerConfig config;
  int chain_id = 0;

  Eigen::Index col(const std::string& name) const;
};

// ---- closed-form full conditionals (parameters exposed for oracles) ----

struct NormalParams {
  double mean;
  double variance;
};
struct GammaParams {
  double shape;
  double rate;
};
struct BetaParams {
  double a;
  double b;
};
struct MvnParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// beta | rest: N(mu*, Sigma*) with Sigma* = (sum u_i x_i x_i'/tau + S_b^-1)^-1.
MvnParams beta_conditional(const RegressionData& data, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& h, double Delta, double tau,
                           const PriorSpec& prior);

// h_i | rest: TN on (0,inf) with the stated mean and variance.
NormalParams h_conditional(double resid, double u, double Delta, double tau);

// Delta | rest.
NormalParams Delta_conditional(const Eigen::VectorXd& resid, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& h, double tau,
                               const PriorSpec& prior);

// tau^{-1} | rest: gamma(n/2 + c, d + sum (u_i/2)(resid_i - Delta (h_i-b)/sqrt u_i)^2).
GammaParams tau_inv_conditional(const Eigen::VectorXd& resid, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& h, double Delta,
                                const PriorSpec& prior);

// css nu | rest: TG(n + alpha1, alpha2 - sum log u_i) I(1,inf).
GammaParams css_nu_conditional(const Eigen::VectorXd& u, double alpha1, double alpha2);

// cscn nu1 | rest with m contaminated of n: beta(m + alpha1, n - m + beta1).
BetaParams cscn_nu1_conditional(int n_contaminated, int n, const PriorSpec& prior);

// csgt nu2 | rest: gamma(n nu1/2 + 1, sum u_i/2 + lambda2).
GammaParams csgt_nu2_conditional(int n, double nu1, double sum_u, double lambda2);

// Hyper-rate conditionals (all truncated gamma on the prior bounds):
// cst lambda ~ TG(2, nu-2); css theta ~ TG(2, nu-1); csgt lambda1 ~ TG(2, nu1-2),
// lambda2 ~ TG(2, nu2).
GammaParams cst_lambda_conditional(double nu);
GammaParams css_theta_conditional(double nu);
GammaParams csgt_lambda2_conditional(double nu2);

// cscn u_i two-point draw: P(u_i = nu2) = p_i/(p_i + q_i), computed in the
// log domain from the stated p_i, q_i.
double cscn_u_prob_contaminated(double resid, double h, double Delta, double tau,
                                double nu1, double nu2);

// ---- MH target log kernels (exposed for grid-normalization tests) ----

double log_kernel_u_cst(double u, double resid, double h, double Delta, double tau,
                        double nu);
double log_kernel_u_csgt(double u, double resid, double h, double Delta, double tau,
                         double nu1, double nu2);
double log_kernel_u_css(double u, double resid, double h, double Delta, double tau,
                        double nu);
double log_kernel_nu_cst(double nu, int n, double sum_u, double sum_log_u,
                         double lambda);
double log_kernel_nu1_csgt(double nu1, int n, double nu2, double sum_u,
                           double sum_log_u, double lambda1);
double log_kernel_nu2_cscn(double nu2, int n_contaminated, double sum_r2,
                           double sum_hr, double tau, const PriorSpec& prior);
double log_kernel_delta_csgt(double delta, int n, double sum_urr, double sum_sur,
                             double sum_hb2);

// Robbins-Monro step-size adaptation toward a target acceptance rate.
class StepAdapter {
 public:
  explicit StepAdapter(double initial_step = 1.0, double target = 0.44)
      : log_step_(std::log(initial_step)), target_(target) {}
  double step() const { return std::exp(log_step_); }
  void update(double accept_prob);
  void freeze() { frozen_ = true; }

 private:
  double log_step_;
  double target_;
  long count_ = 0;
  bool frozen_ = false;
};

// ---- chain runner and summaries ----

Chain run_chain(const RegressionData& data, Family family, const PriorSpec& prior,
                const SamplerConfig& config, int chain_id = 0);

// n_chains chains on independent streams, run in parallel (worker count
// capped by CSMSN_THREADS).
std::vector<Chain> run_chains(const RegressionData& data, Family family,
                              const PriorSpec& prior, const SamplerConfig& config);

enum class Stat { mean, median, mode };

std::string stat_name(Stat s);

struct ParamSummary {
  std::string name;
  double estimate;  // per the family policy
  Stat statistic;
  double mean, sd, median, mode;
  double ci_lower, ci_upper;  // 95% equal-tail
};

// Table-driven per-family choice of posterior statistic; overridable per
// column name.
struct SummaryPolicy {
  std::map<std::string, Stat> overrides;
};

Stat default_stat(Family family, const std::string& column);

std::vector<ParamSummary> summarize(const std::vector<Chain>& chains,
                                    const SummaryPolicy& policy = {});
std::vector<ParamSummary> summarize(const Chain& chain,
                                    const SummaryPolicy& policy = {});

// Pooled draws across chains (row-concatenation; columns must match).
Eigen::MatrixXd pooled_draws(const std::vector<Chain>& chains);

// Helpers shared with diagnostics/tests.
double quantile(std::vector<double> sorted_or_not, double p);
double kde_mode(const std::vector<double>& x);

}  // namespace csmsn

#endif
