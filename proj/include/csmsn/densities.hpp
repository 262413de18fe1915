#ifndef CSMSN_DENSITIES_HPP
#define CSMSN_DENSITIES_HPP

#include <Eigen/Dense>

#include "csmsn/params.hpp"
#include "csmsn/quadrature.hpp"

// Densities and moments of the five centered families, and of their direct-
// parameterization counterparts used for profiling. log-pdf is the primitive
// everywhere; pdf = exp(log_pdf).

namespace csmsn {

// Log density of the mixing law at u (cst: gamma(nu/2,nu/2); css: beta(nu,1);
// csgt: gamma(nu1/2,nu2/2)). cscn/csn are handled discretely by callers.
double log_mixing_pdf(double u, Family family, const std::vector<double>& nu);

// Precomputed evaluation context: build once per parameter point, evaluate at
// many responses. Pure and reentrant; quadrature state is per call.
class CpDensity {
 public:
  explicit CpDensity(const CpParams& p, const QuadSpec& quad = {});

  // log f(y) with location mu (regression use: mu = x_i' beta).
  double log_pdf_at(double y, double mu) const;

 private:
  Family family_;
  std::vector<double> nu_;
  double sig_om1_;   // sigma * omega1, the DP scale
  double a0_;        // xi1 / omega1 = -s*gamma^{1/3}/omega1
  double lambda_;    // DP slant
  QuadSpec quad_;

  double log_csn_scaled(double d, double u) const;  // CSN(mu, sigma^2/u, gamma)
};

// Scalar-parameter entry points (location read from p.beta, which must be
// intercept-only).
double log_pdf(double y, const CpParams& p, const QuadSpec& quad = {});
double pdf(double y, const CpParams& p, const QuadSpec& quad = {});

// Density of the direct-parameterization scale mixture
//   2 * Integral of sqrt(u)/omega phi(sqrt(u) z) Phi(lambda sqrt(u) z) dG(u),
//   z = (y - xi)/omega.
// This is the classical SMSN family; it coincides with the centered family
// for the pure skew-normal and whenever the skewness is zero.
double log_pdf_dp_smsn(double y, const DpParams& p, const QuadSpec& quad = {});
double pdf_dp_smsn(double y, const DpParams& p, const QuadSpec& quad = {});

// Mean and variance under the family's closed-form expressions. Throws when
// the variance does not exist for the shape values.
std::pair<double, double> moments(const CpParams& p);

struct SnMoments {
  double mean;
  double variance;
  double skewness;         // Pearson gamma1 (= the gamma parameter)
  double kurtosis_excess;  // gamma2
};
// Skew-normal only; the mixture members do not carry this closed form.
SnMoments sn_moments(const CpParams& p);

// Sum of log f(y_i | mu_i = x_i' beta) over observations.
double log_likelihood(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                      const CpParams& p, const QuadSpec& quad = {});

}  // namespace csmsn

#endif
