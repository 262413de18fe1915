#ifndef CSMSN_PARAMS_HPP
#define CSMSN_PARAMS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

// Parameterizations of the skew-normal family and its scale mixtures, plus
// the exact bijections between them:
//
//   centered (CP):  mean mu (or X*beta), variance sigma^2, Pearson skewness
//                   gamma, shape vector nu
//   direct (DP):    location xi, scale omega, slant lambda
//   working:        (beta, Delta, tau) used inside the Gibbs sampler, with
//                   delta = Delta/sqrt(tau + Delta^2) and
//                   sigma^2 = tau + Delta^2 (1 - b^2)
//
// All functions are pure; validation is strict-reject (throws), never
// clamping.

namespace csmsn {

enum class Family { csn, cst, css, cscn, csgt };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Number of shape parameters: 0 for csn, 1 for cst/css, 2 for cscn/csgt.
int shape_dim(Family f);

struct Constants {
  double b;          // sqrt(2/pi)
  double s;          // (2/(4-pi))^(1/3)
  double b2;         // b^2 = 2/pi
  double gamma_max;  // ((4-pi)/2) b^3 / (1-b^2)^(3/2), the skewness bound
};

// Evaluated once at runtime from the closed forms (no rounded literals).
const Constants& constants();

struct CpParams {
  Eigen::VectorXd beta;    // regression coefficients; location when length 1
  double sigma2 = 1.0;     // fixed at 1 for csgt
  double gamma = 0.0;      // Pearson skewness, |gamma| < gamma_max
  Family family = Family::csn;
  std::vector<double> nu;  // shape vector, length shape_dim(family)

  double mu() const;  // location; requires an intercept-only beta
};

struct DpParams {
  double xi = 0.0;
  double omega = 1.0;  // scale > 0
  double lambda = 0.0;
  Family family = Family::csn;
  std::vector<double> nu;
};

struct WorkParams {
  Eigen::VectorXd beta;
  double Delta = 0.0;
  double tau = 1.0;  // > 0
  std::vector<double> nu;

  double delta() const;   // Delta / sqrt(tau + Delta^2)
  double sigma2() const;  // tau + Delta^2 (1 - b^2)
};

// Throws ParameterError when an invariant is violated.
void validate(const CpParams& p);
void validate_shape(Family f, const std::vector<double>& nu);

// delta <-> gamma (scalar legs of the bijections).
double delta_from_gamma(double gamma);
double gamma_from_delta(double delta);

// lambda <-> delta.
inline double delta_from_lambda(double lambda) {
  return lambda / std::sqrt(1.0 + lambda * lambda);
}
double lambda_from_delta(double delta);

DpParams cp_to_dp(const CpParams& p);
CpParams dp_to_cp(const DpParams& p);

CpParams work_to_cp(const WorkParams& w, Family family);
WorkParams cp_to_work(const CpParams& p);

// (Delta, tau) as functions of delta alone under the csgt sigma = 1 fix:
// Delta = delta/sqrt(1-b^2 delta^2), tau = (1-delta^2)/(1-b^2 delta^2).
std::pair<double, double> delta_to_work_csgt(double delta);

}  // namespace csmsn

#endif
