#ifndef CSMSN_RANDOM_HPP
#define CSMSN_RANDOM_HPP

#include <Eigen/Dense>

#include "csmsn/params.hpp"
#include "csmsn/rng.hpp"

// Primitive samplers used by the Gibbs kernels, plus forward simulation of
// responses through the stochastic representation.

namespace csmsn {

struct MixingLaw {
  Family family = Family::csn;
  std::vector<double> nu;
};

// Draw from N(mean, variance) restricted to (lower, upper); either bound may
// be infinite. Inverse-CDF in the central region, Robert-style exponential
// rejection when the region sits more than 5 sd into a tail.
double sample_truncated_normal(double mean, double variance, double lower,
                               double upper, RngStream& rng);

// Draw from gamma(shape, rate) restricted to (lower, upper) by inverting the
// regularized incomplete gamma ratio. Throws NumericError when the region
// carries essentially no mass.
double sample_truncated_gamma(double shape, double rate, double lower,
                              double upper, RngStream& rng);

// One draw of the latent scale U for the family's mixing law:
// cst: gamma(nu/2, nu/2); css: beta(nu, 1); cscn: nu2 w.p. nu1, else 1;
// csgt: gamma(nu1/2, nu2/2); csn: 1.
double sample_mixing(const MixingLaw& law, RngStream& rng);

// One draw from CSN(mu, sigma2, gamma) via the Henze representation of the
// direct parameterization.
double sample_csn(double mu, double sigma2, double gamma, RngStream& rng);

// One draw from the full CSMSN law (Definition route: mu + U^{-1/2} Z with
// Z ~ CSN(0, sigma2, gamma)).
double sample_csmsn(const CpParams& p, RngStream& rng);

// Simulate the regression response y = X beta + eps with eps i.i.d. from the
// family, using the (beta, Delta, tau) conditional representation
// y_i = x_i' beta + (Delta/sqrt(u)) (h - b) + sqrt(tau/u) z.
Eigen::VectorXd simulate_response(const Eigen::MatrixXd& X, const CpParams& p,
                                  RngStream& rng);

// Same distribution generated through sample_csmsn; kept as a second
// algebraic route for distributional tests.
Eigen::VectorXd simulate_response_mixture_route(const Eigen::MatrixXd& X,
                                                const CpParams& p, RngStream& rng);

}  // namespace csmsn

#endif
