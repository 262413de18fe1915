#include "csmsn/densities.hpp"

#include <cmath>

#include "csmsn/errors.hpp"
#include "csmsn/special.hpp"

namespace csmsn {

double log_mixing_pdf(double u, Family family, const std::vector<double>& nu) {
  if (!(u > 0.0)) return -std::numeric_limits<double>::infinity();
  switch (family) {
    case Family::cst: {
      const double h = 0.5 * nu[0];
      return h * std::log(h) - log_gamma(h) + (h - 1.0) * std::log(u) - h * u;
    }
    case Family::css:
      if (u >= 1.0) return -std::numeric_limits<double>::infinity();
      return std::log(nu[0]) + (nu[0] - 1.0) * std::log(u);
    case Family::csgt: {
      const double a = 0.5 * nu[0], r = 0.5 * nu[1];
      return a * std::log(r) - log_gamma(a) + (a - 1.0) * std::log(u) - r * u;
    }
    default:
      throw ParameterError("log_mixing_pdf: family has no continuous mixing law");
  }
}

CpDensity::CpDensity(const CpParams& p, const QuadSpec& quad) : quad_(quad) {
  validate(p);
  const auto& k = constants();
  family_ = p.family;
  nu_ = p.nu;
  const double t = k.s * signed_cbrt(p.gamma);
  const double omega1 = std::sqrt(1.0 + t * t);
  sig_om1_ = std::sqrt(p.sigma2) * omega1;
  a0_ = -t / omega1;
  lambda_ = t / std::sqrt(k.b2 + t * t * (k.b2 - 1.0));
}

double CpDensity::log_csn_scaled(double d, double u) const {
  const double arg = std::sqrt(u) * d - a0_;
  return kLogTwo - std::log(sig_om1_) + 0.5 * std::log(u) + log_norm_pdf(arg) +
         log_norm_cdf(lambda_ * arg);
}

double CpDensity::log_pdf_at(double y, double mu) const {
  const double d = (y - mu) / sig_om1_;
  switch (family_) {
    case Family::csn:
      return log_csn_scaled(d, 1.0);
    case Family::cscn:
      return log_sum_exp(std::log(nu_[0]) + log_csn_scaled(d, nu_[1]),
                         std::log1p(-nu_[0]) + log_csn_scaled(d, 1.0));
    case Family::css:
      return log_integrate_positive(
          [&](double u) { return log_csn_scaled(d, u) + log_mixing_pdf(u, family_, nu_); },
          1.0, quad_);
    case Family::cst:
    case Family::csgt:
      return log_integrate_positive(
          [&](double u) { return log_csn_scaled(d, u) + log_mixing_pdf(u, family_, nu_); },
          std::numeric_limits<double>::infinity(), quad_);
  }
  return -std::numeric_limits<double>::infinity();
}

double log_pdf(double y, const CpParams& p, const QuadSpec& quad) {
  return CpDensity(p, quad).log_pdf_at(y, p.mu());
}

double pdf(double y, const CpParams& p, const QuadSpec& quad) {
  return std::exp(log_pdf(y, p, quad));
}

namespace {

double log_dp_core(double z, double omega, double lambda, double u) {
  const double arg = std::sqrt(u) * z;
  return kLogTwo - std::log(omega) + 0.5 * std::log(u) + log_norm_pdf(arg) +
         log_norm_cdf(lambda * arg);
}

}  // namespace

double log_pdf_dp_smsn(double y, const DpParams& p, const QuadSpec& quad) {
  if (!(p.omega > 0.0)) throw ParameterError("omega must be positive");
  validate_shape(p.family, p.nu);
  const double z = (y - p.xi) / p.omega;
  switch (p.family) {
    case Family::csn:
      return log_dp_core(z, p.omega, p.lambda, 1.0);
    case Family::cscn:
      return log_sum_exp(
          std::log(p.nu[0]) + log_dp_core(z, p.omega, p.lambda, p.nu[1]),
          std::log1p(-p.nu[0]) + log_dp_core(z, p.omega, p.lambda, 1.0));
    case Family::css:
      return log_integrate_positive(
          [&](double u) {
            return log_dp_core(z, p.omega, p.lambda, u) +
                   log_mixing_pdf(u, p.family, p.nu);
          },
          1.0, quad);
    case Family::cst:
    case Family::csgt:
      return log_integrate_positive(
          [&](double u) {
            return log_dp_core(z, p.omega, p.lambda, u) +
                   log_mixing_pdf(u, p.family, p.nu);
          },
          std::numeric_limits<double>::infinity(), quad);
  }
  return -std::numeric_limits<double>::infinity();
}

double pdf_dp_smsn(double y, const DpParams& p, const QuadSpec& quad) {
  return std::exp(log_pdf_dp_smsn(y, p, quad));
}

std::pair<double, double> moments(const CpParams& p) {
  validate(p);
  const double mean = p.mu();
  double e_inv_u = 1.0;  // E(1/U)
  switch (p.family) {
    case Family::csn: break;
    case Family::cst:
      if (!(p.nu[0] > 2.0)) throw ParameterError("cst variance undefined for nu <= 2");
      e_inv_u = p.nu[0] / (p.nu[0] - 2.0);
      break;
    case Family::css:
      if (!(p.nu[0] > 1.0)) throw ParameterError("css variance undefined for nu <= 1");
      e_inv_u = p.nu[0] / (p.nu[0] - 1.0);
      break;
    case Family::cscn:
      e_inv_u = (p.nu[0] + p.nu[1] * (1.0 - p.nu[0])) / p.nu[1];
      break;
    case Family::csgt:
      if (!(p.nu[0] > 2.0)) throw ParameterError("csgt variance undefined for nu1 <= 2");
      e_inv_u = p.nu[1] / (p.nu[0] - 2.0);
      break;
  }
  return {mean, p.sigma2 * e_inv_u};
}

SnMoments sn_moments(const CpParams& p) {
  if (p.family != Family::csn)
    throw ParameterError("sn_moments: kurtosis closed form is skew-normal only");
  validate(p);
  const auto& k = constants();
  const double delta = delta_from_gamma(p.gamma);
  const double bd2 = k.b2 * delta * delta;
  SnMoments m;
  m.mean = p.mu();
  m.variance = p.sigma2;
  m.skewness = p.gamma;
  m.kurtosis_excess = 2.0 * (M_PI - 3.0) * bd2 * bd2 / ((1.0 - bd2) * (1.0 - bd2));
  return m;
}

double log_likelihood(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                      const CpParams& p, const QuadSpec& quad) {
  if (X.rows() != y.size() || X.cols() != p.beta.size())
    throw DataError("log_likelihood: dimension mismatch between X, y and beta");
  const CpDensity den(p, quad);
  const Eigen::VectorXd mu = X * p.beta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) total += den.log_pdf_at(y(i), mu(i));
  return total;
}

}  // namespace csmsn
