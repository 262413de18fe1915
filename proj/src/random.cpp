#include "csmsn/random.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "csmsn/errors.hpp"
#include "csmsn/special.hpp"

namespace csmsn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Robert (1995) one-sided rejection for a standard normal truncated to
// (a, inf) with a > 0: exponential proposal with the optimal rate.
double robert_tail(double a, double b, RngStream& rng) {
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a + rng.exponential(lambda);
    if (z >= b) continue;
    const double diff = z - lambda;
    if (std::log(rng.uniform()) <= -0.5 * diff * diff) return z;
  }
}

// Standard normal truncated to (a, b).
double std_truncated_normal(double a, double b, RngStream& rng) {
  if (a > 5.0) return robert_tail(a, b, rng);
  if (b < -5.0) return -robert_tail(-b, -a, rng);
  const double pa = (a == -kInf) ? 0.0 : norm_cdf(a);
  const double pb = (b == kInf) ? 1.0 : norm_cdf(b);
  for (;;) {
    const double p = pa + (pb - pa) * rng.uniform();
    if (p <= 0.0 || p >= 1.0) continue;  // guard against rounding at the ends
    const double z = norm_quantile(p);
    if (z > a && z < b) return z;
  }
}

}  // namespace

double sample_truncated_normal(double mean, double variance, double lower,
                               double upper, RngStream& rng) {
  if (!(variance > 0.0)) throw ParameterError("truncated normal: variance must be positive");
  if (!(lower < upper)) throw ParameterError("truncated normal: need lower < upper");
  const double sd = std::sqrt(variance);
  const double a = (lower == -kInf) ? -kInf : (lower - mean) / sd;
  const double b = (upper == kInf) ? kInf : (upper - mean) / sd;
  for (;;) {
    const double x = mean + sd * std_truncated_normal(a, b, rng);
    if (x > lower && x < upper) {
      assert(x > lower && x < upper);
      return x;
    }
  }
}

double sample_truncated_gamma(double shape, double rate, double lower,
                              double upper, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw ParameterError("truncated gamma: shape and rate must be positive");
  if (!(lower >= 0.0 && lower < upper))
    throw ParameterError("truncated gamma: need 0 <= lower < upper");

  const double plo = (lower == 0.0) ? 0.0 : gamma_p(shape, rate * lower);
  const double phi = (upper == kInf) ? 1.0 : gamma_p(shape, rate * upper);

  double x;
  if (plo > 0.9) {
    // Deep upper tail: work with the complementary ratio for resolution.
    const double qlo = (lower == 0.0) ? 1.0 : gamma_q(shape, rate * lower);
    const double qhi = (upper == kInf) ? 0.0 : gamma_q(shape, rate * upper);
    if (!(qlo - qhi > 1e-300))
      throw NumericError("truncated gamma: truncation region carries no mass", qlo - qhi);
    for (;;) {
      const double q = qhi + (qlo - qhi) * rng.uniform();
      if (q <= 0.0 || q >= 1.0) continue;
      x = gamma_q_inv(shape, q) / rate;
      if (x > lower && x < upper) break;
    }
  } else {
    if (!(phi - plo > 1e-300))
      throw NumericError("truncated gamma: truncation region carries no mass", phi - plo);
    for (;;) {
      const double p = plo + (phi - plo) * rng.uniform();
      if (p <= 0.0 || p >= 1.0) continue;
      x = gamma_p_inv(shape, p) / rate;
      if (x > lower && x < upper) break;
    }
  }
  assert(x > lower && x < upper);
  return x;
}

double sample_mixing(const MixingLaw& law, RngStream& rng) {
  validate_shape(law.family, law.nu);
  switch (law.family) {
    case Family::csn: return 1.0;
    case Family::cst: return rng.gamma(0.5 * law.nu[0], 0.5 * law.nu[0]);
    case Family::css: return rng.beta(law.nu[0], 1.0);
    case Family::cscn: return rng.uniform() < law.nu[0] ? law.nu[1] : 1.0;
    case Family::csgt: return rng.gamma(0.5 * law.nu[0], 0.5 * law.nu[1]);
  }
  return 1.0;
}

double sample_csn(double mu, double sigma2, double gamma, RngStream& rng) {
  CpParams p;
  p.beta = Eigen::VectorXd::Constant(1, mu);
  p.sigma2 = sigma2;
  p.gamma = gamma;
  const DpParams d = cp_to_dp(p);
  const double del = delta_from_lambda(d.lambda);
  const double h = std::abs(rng.normal());
  const double z = rng.normal();
  return d.xi + d.omega * (del * h + std::sqrt(1.0 - del * del) * z);
}

double sample_csmsn(const CpParams& p, RngStream& rng) {
  validate(p);
  const double u = sample_mixing({p.family, p.nu}, rng);
  return p.mu() + sample_csn(0.0, p.sigma2, p.gamma, rng) / std::sqrt(u);
}

Eigen::VectorXd simulate_response(const Eigen::MatrixXd& X, const CpParams& p,
                                  RngStream& rng) {
  CpParams err = p;
  err.beta = Eigen::VectorXd::Zero(1);
  validate(err);
  const WorkParams w = cp_to_work(err);
  const double b = constants().b;
  const MixingLaw law{p.family, p.nu};

  Eigen::VectorXd y(X.rows());
  const Eigen::VectorXd mean = X * p.beta;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double u = sample_mixing(law, rng);
    const double h = std::abs(rng.normal());
    const double z = rng.normal();
    const double ru = std::sqrt(u);
    y(i) = mean(i) + (w.Delta / ru) * (h - b) + std::sqrt(w.tau) / ru * z;
  }
  return y;
}

Eigen::VectorXd simulate_response_mixture_route(const Eigen::MatrixXd& X,
                                                const CpParams& p, RngStream& rng) {
  CpParams err = p;
  err.beta = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd y = X * p.beta;
  for (Eigen::Index i = 0; i < X.rows(); ++i) y(i) += sample_csmsn(err, rng);
  return y;
}

}  // namespace csmsn
