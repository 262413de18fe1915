#ifndef CSMSN_PROFILE_HPP
#define CSMSN_PROFILE_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csmsn/mcmc.hpp"
#include "csmsn/params.hpp"

// Profiled relative log-likelihood machinery: inner derivative-free MLE over
// nuisance parameters at fixed skewness (or fixed nu), under both the
// centered and direct parameterizations, emitting plot-data grids.

namespace csmsn {

struct NelderMeadOptions {
  double tol = 1e-8;       // convergence on the objective value
  int max_iter = 2000;
  double initial_step = 0.25;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value;  // maximum found (we maximize)
  bool converged;
  int evaluations;
};

// Maximizes f by a Lagarias-style simplex on the given start point.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& start,
                             const NelderMeadOptions& opts = {});

// Parameters held fixed during the inner maximization (centered scale).
struct FixedCp {
  std::optional<Eigen::VectorXd> beta;
  std::optional<double> sigma2;
  std::optional<double> gamma;
  std::optional<std::vector<double>> nu;
};

struct FixedDp {
  std::optional<Eigen::VectorXd> beta;  // DP location coefficients
  std::optional<double> omega2;
  std::optional<double> lambda;
  std::optional<std::vector<double>> nu;
};

struct MleOptions {
  NelderMeadOptions inner;
  int restarts = 3;  // cold start + jittered warm starts
  std::uint64_t jitter_seed = 7;
};

struct MleResult {
  CpParams params;
  double loglik;
  bool converged;
};

struct MleResultDp {
  Eigen::VectorXd beta;
  DpParams params;  // xi carries beta(0) for intercept-only designs
  double loglik;
  bool converged;
};

// Maximum likelihood with part of the parameter vector pinned. Free
// parameters are optimized on transformed scales (log sigma2, bounded tanh
// map for gamma, log(nu - lower) style maps for the shapes) from
// moment-based starts; `start` overrides the start when provided.
MleResult mle_fixed(const RegressionData& data, Family family, const FixedCp& fixed,
                    const MleOptions& opts = {}, const CpParams* start = nullptr);

MleResultDp mle_fixed_dp(const RegressionData& data, Family family,
                         const FixedDp& fixed, const MleOptions& opts = {});

enum class Parameterization { cp, dp };

struct ProfileGrid {
  std::string axis;          // "gamma", "lambda", "nu", "nu1,nu2"
  Eigen::MatrixXd points;    // grid x axis-dimension
  Eigen::VectorXd value;     // relative profiled log-likelihood (<= 0, max 0)
  Eigen::Index argmax = 0;
  double scale = 1.0;        // 2 for the skewness profiles (plot convention)
  std::vector<int> failed;   // grid rows whose inner optimizer did not converge
};

// Profile over the skewness axis (gamma under CP, lambda under DP). Points
// are swept outward from the unconstrained MLE with warm starts.
ProfileGrid profile_skewness(const RegressionData& data, Family family,
                             const Eigen::VectorXd& grid, Parameterization param,
                             const MleOptions& opts = {});

// Profile over the shape axis; 2-D rectangular grids for cscn/csgt are passed
// as one row per (nu1, nu2) pair.
ProfileGrid profile_nu(const RegressionData& data, Family family,
                       const Eigen::MatrixXd& grid, const MleOptions& opts = {});

}  // namespace csmsn

#endif
