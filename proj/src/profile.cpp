#include "csmsn/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csmsn/densities.hpp"
#include "csmsn/errors.hpp"
#include "csmsn/rng.hpp"
#include "csmsn/special.hpp"

namespace csmsn {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& start,
                             const NelderMeadOptions& opts) {
  const int d = static_cast<int>(start.size());
  NelderMeadResult out;
  out.evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : kNegInf;
  };

  if (d == 0) {  // everything fixed: nothing to optimize
    out.x = start;
    out.value = eval(start);
    out.converged = true;
    return out;
  }

  // Simplex of d+1 vertices; standard Lagarias parameters, maximizing.
  std::vector<Eigen::VectorXd> v(d + 1, start);
  std::vector<double> fv(d + 1);
  for (int j = 0; j < d; ++j)
    v[j + 1](j) += opts.initial_step * std::max(std::abs(start(j)), 1.0);
  for (int j = 0; j <= d; ++j) fv[j] = eval(v[j]);

  auto order = [&] {
    std::vector<int> idx(d + 1);
    for (int j = 0; j <= d; ++j) idx[j] = j;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] > fv[b]; });
    std::vector<Eigen::VectorXd> v2(d + 1);
    std::vector<double> f2(d + 1);
    for (int j = 0; j <= d; ++j) {
      v2[j] = v[idx[j]];
      f2[j] = fv[idx[j]];
    }
    v.swap(v2);
    fv.swap(f2);
  };

  order();
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    if (std::isfinite(fv[0]) && std::isfinite(fv[d]) && fv[0] - fv[d] < opts.tol)
      break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; ++j) centroid += v[j];
    centroid /= d;

    const Eigen::VectorXd xr = centroid + (centroid - v[d]);  // reflection
    const double fr = eval(xr);
    if (fr > fv[0]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - v[d]);  // expansion
      const double fe = eval(xe);
      if (fe > fr) {
        v[d] = xe;
        fv[d] = fe;
      } else {
        v[d] = xr;
        fv[d] = fr;
      }
    } else if (fr > fv[d - 1]) {
      v[d] = xr;
      fv[d] = fr;
    } else {
      const Eigen::VectorXd xc = centroid + 0.5 * (v[d] - centroid);  // contraction
      const double fc = eval(xc);
      if (fc > fv[d]) {
        v[d] = xc;
        fv[d] = fc;
      } else {
        for (int j = 1; j <= d; ++j) {  // shrink toward the best vertex
          v[j] = v[0] + 0.5 * (v[j] - v[0]);
          fv[j] = eval(v[j]);
        }
      }
    }
    order();
  }
  out.x = v[0];
  out.value = fv[0];
  out.converged = iter < opts.max_iter && std::isfinite(fv[0]);
  return out;
}

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Free parameters <-> unconstrained optimizer coordinates, CP scale.
struct CpMap {
  Family family;
  FixedCp fixed;
  int p;

  int dim() const {
    int d = 0;
    if (!fixed.beta) d += p;
    if (!fixed.sigma2 && family != Family::csgt) d += 1;
    if (!fixed.gamma) d += 1;
    if (!fixed.nu) d += shape_dim(family);
    return d;
  }

  CpParams decode(const Eigen::VectorXd& x) const {
    const double gmax = constants().gamma_max;
    CpParams par;
    par.family = family;
    int at = 0;
    if (fixed.beta) {
      par.beta = *fixed.beta;
    } else {
      par.beta = x.segment(at, p);
      at += p;
    }
    if (family == Family::csgt)
      par.sigma2 = 1.0;
    else
      par.sigma2 = fixed.sigma2 ? *fixed.sigma2 : std::exp(x(at++));
    par.gamma = fixed.gamma ? *fixed.gamma : gmax * std::tanh(x(at++));
    if (fixed.nu) {
      par.nu = *fixed.nu;
    } else {
      switch (family) {
        case Family::csn: break;
        case Family::cst: par.nu = {2.0 + std::exp(x(at++))}; break;
        case Family::css: par.nu = {1.0 + std::exp(x(at++))}; break;
        case Family::cscn:
          par.nu = {logistic(x(at)), logistic(x(at + 1))};
          at += 2;
          break;
        case Family::csgt:
          par.nu = {2.0 + std::exp(x(at)), std::exp(x(at + 1))};
          at += 2;
          break;
      }
    }
    return par;
  }

  Eigen::VectorXd encode(const CpParams& par) const {
    const double gmax = constants().gamma_max;
    Eigen::VectorXd x(dim());
    int at = 0;
    if (!fixed.beta)
      for (int j = 0; j < p; ++j) x(at++) = par.beta(j);
    if (!fixed.sigma2 && family != Family::csgt) x(at++) = std::log(par.sigma2);
    if (!fixed.gamma)
      x(at++) = std::atanh(std::clamp(par.gamma / gmax, -0.999, 0.999));
    if (!fixed.nu) {
      switch (family) {
        case Family::csn: break;
        case Family::cst: x(at++) = std::log(par.nu[0] - 2.0); break;
        case Family::css: x(at++) = std::log(par.nu[0] - 1.0); break;
        case Family::cscn:
          x(at++) = logit(par.nu[0]);
          x(at++) = logit(par.nu[1]);
          break;
        case Family::csgt:
          x(at++) = std::log(par.nu[0] - 2.0);
          x(at++) = std::log(par.nu[1]);
          break;
      }
    }
    return x;
  }
};

// OLS-based start with residual-skewness for gamma and conservative shape
// defaults.
CpParams moment_start(const RegressionData& data, Family family, const FixedCp& fixed) {
  const double gmax = constants().gamma_max;
  CpParams par;
  par.family = family;
  par.beta = fixed.beta ? *fixed.beta
                        : Eigen::VectorXd(data.X.colPivHouseholderQr().solve(data.y));
  const Eigen::VectorXd resid = data.y - data.X * par.beta;
  const double n = static_cast<double>(resid.size());
  const double rvar = std::max(resid.squaredNorm() / std::max(n - 1.0, 1.0), 1e-8);
  if (family == Family::csgt)
    par.sigma2 = 1.0;
  else
    par.sigma2 = fixed.sigma2 ? *fixed.sigma2 : rvar;
  if (fixed.gamma) {
    par.gamma = *fixed.gamma;
  } else {
    double m3 = 0.0;
    for (Eigen::Index i = 0; i < resid.size(); ++i) m3 += std::pow(resid(i), 3);
    m3 /= n;
    const double skew = m3 / std::pow(rvar, 1.5);
    par.gamma = std::clamp(skew, -0.9 * gmax, 0.9 * gmax);
  }
  if (fixed.nu) {
    par.nu = *fixed.nu;
  } else {
    switch (family) {
      case Family::csn: break;
      case Family::cst: par.nu = {8.0}; break;
      case Family::css: par.nu = {3.0}; break;
      case Family::cscn: par.nu = {0.3, 0.5}; break;
      case Family::csgt: par.nu = {8.0, std::max(6.0 * rvar, 0.2)}; break;
    }
  }
  return par;
}

}  // namespace

MleResult mle_fixed(const RegressionData& data, Family family, const FixedCp& fixed,
                    const MleOptions& opts, const CpParams* start) {
  const CpMap map{family, fixed, static_cast<int>(data.X.cols())};
  auto objective = [&](const Eigen::VectorXd& x) -> double {
    try {
      return log_likelihood(data.y, data.X, map.decode(x));
    } catch (const std::exception&) {
      return kNegInf;
    }
  };

  const CpParams base = start ? *start : moment_start(data, family, fixed);
  Eigen::VectorXd x0 = map.encode(base);

  NelderMeadResult best;
  best.value = kNegInf;
  best.converged = false;
  RngStream jitter(opts.jitter_seed, 0);
  for (int r = 0; r < std::max(opts.restarts, 1); ++r) {
    Eigen::VectorXd xs = x0;
    if (r > 0) {
      // Jittered warm start from the best point found so far.
      xs = best.value > kNegInf ? best.x : x0;
      for (Eigen::Index j = 0; j < xs.size(); ++j) xs(j) += 0.15 * jitter.normal();
    }
    const NelderMeadResult run = nelder_mead(objective, xs, opts.inner);
    if (run.value > best.value) best = run;
  }

  MleResult out;
  out.params = map.decode(best.x);
  out.loglik = best.value;
  out.converged = best.converged && std::isfinite(best.value);
  return out;
}

namespace {

// Direct-parameterization analogue; the model is y_i = x_i' beta + e_i with
// e_i ~ SMSN-DP(0, omega^2, lambda, nu). omega is pinned at 1 for csgt.
struct DpMap {
  Family family;
  FixedDp fixed;
  int p;

  int dim() const {
    int d = 0;
    if (!fixed.beta) d += p;
    if (!fixed.omega2 && family != Family::csgt) d += 1;
    if (!fixed.lambda) d += 1;
    if (!fixed.nu) d += shape_dim(family);
    return d;
  }

  std::pair<Eigen::VectorXd, DpParams> decode(const Eigen::VectorXd& x) const {
    DpParams par;
    par.family = family;
    par.xi = 0.0;
    int at = 0;
    Eigen::VectorXd beta;
    if (fixed.beta) {
      beta = *fixed.beta;
    } else {
      beta = x.segment(at, p);
      at += p;
    }
    if (family == Family::csgt)
      par.omega = 1.0;
    else
      par.omega = fixed.omega2 ? std::sqrt(*fixed.omega2) : std::exp(0.5 * x(at++));
    par.lambda = fixed.lambda ? *fixed.lambda : x(at++);
    if (fixed.nu) {
      par.nu = *fixed.nu;
    } else {
      switch (family) {
        case Family::csn: break;
        case Family::cst: par.nu = {2.0 + std::exp(x(at++))}; break;
        case Family::css: par.nu = {1.0 + std::exp(x(at++))}; break;
        case Family::cscn:
          par.nu = {logistic(x(at)), logistic(x(at + 1))};
          at += 2;
          break;
        case Family::csgt:
          par.nu = {2.0 + std::exp(x(at)), std::exp(x(at + 1))};
          at += 2;
          break;
      }
    }
    return {beta, par};
  }
};

}  // namespace

MleResultDp mle_fixed_dp(const RegressionData& data, Family family,
                         const FixedDp& fixed, const MleOptions& opts) {
  const int p = static_cast<int>(data.X.cols());
  const DpMap map{family, fixed, p};

  auto objective = [&](const Eigen::VectorXd& x) -> double {
    try {
      const auto [beta, par] = map.decode(x);
      const Eigen::VectorXd e = data.y - data.X * beta;
      double total = 0.0;
      for (Eigen::Index i = 0; i < e.size(); ++i)
        total += log_pdf_dp_smsn(e(i), par);
      return total;
    } catch (const std::exception&) {
      return kNegInf;
    }
  };

  // Start from the CP moment start pushed through cp_to_dp.
  const CpParams cp0 = moment_start(data, family, FixedCp{});
  CpParams cp0_loc = cp0;
  cp0_loc.beta = Eigen::VectorXd::Zero(1);
  const DpParams dp0 = cp_to_dp(cp0_loc);

  Eigen::VectorXd x0(map.dim());
  int at = 0;
  if (!fixed.beta) {
    Eigen::VectorXd beta0 = cp0.beta;
    // Shift an intercept column by the DP location offset when present.
    for (int j = 0; j < p; ++j) {
      if ((data.X.col(j).array() == 1.0).all()) {
        beta0(j) += dp0.xi;
        break;
      }
    }
    for (int j = 0; j < p; ++j) x0(at++) = beta0(j);
  }
  if (!fixed.omega2 && family != Family::csgt)
    x0(at++) = std::log(dp0.omega * dp0.omega);
  if (!fixed.lambda) x0(at++) = dp0.lambda;
  if (!fixed.nu) {
    switch (family) {
      case Family::csn: break;
      case Family::cst: x0(at++) = std::log(cp0.nu[0] - 2.0); break;
      case Family::css: x0(at++) = std::log(cp0.nu[0] - 1.0); break;
      case Family::cscn:
        x0(at++) = logit(cp0.nu[0]);
        x0(at++) = logit(cp0.nu[1]);
        break;
      case Family::csgt:
        x0(at++) = std::log(cp0.nu[0] - 2.0);
        x0(at++) = std::log(cp0.nu[1]);
        break;
    }
  }

  NelderMeadResult best;
  best.value = kNegInf;
  best.converged = false;
  RngStream jitter(opts.jitter_seed, 1);
  for (int r = 0; r < std::max(opts.restarts, 1); ++r) {
    Eigen::VectorXd xs = x0;
    if (r > 0) {
      xs = best.value > kNegInf ? best.x : x0;
      for (Eigen::Index j = 0; j < xs.size(); ++j) xs(j) += 0.15 * jitter.normal();
    }
    const NelderMeadResult run = nelder_mead(objective, xs, opts.inner);
    if (run.value > best.value) best = run;
  }

  MleResultDp out;
  std::tie(out.beta, out.params) = map.decode(best.x);
  out.loglik = best.value;
  out.converged = best.converged && std::isfinite(best.value);
  return out;
}

namespace {

void finalize_relative(ProfileGrid& grid) {
  double mx = kNegInf;
  for (Eigen::Index i = 0; i < grid.value.size(); ++i)
    if (std::isfinite(grid.value(i)) && grid.value(i) > mx) {
      mx = grid.value(i);
      grid.argmax = i;
    }
  for (Eigen::Index i = 0; i < grid.value.size(); ++i)
    if (std::isfinite(grid.value(i)))
      grid.value(i) = grid.scale * (grid.value(i) - mx);
}

}  // namespace

ProfileGrid profile_skewness(const RegressionData& data, Family family,
                             const Eigen::VectorXd& grid, Parameterization param,
                             const MleOptions& opts) {
  const double gmax = constants().gamma_max;
  ProfileGrid out;
  out.axis = param == Parameterization::cp ? "gamma" : "lambda";
  out.points = grid;
  out.value = Eigen::VectorXd::Constant(grid.size(),
                                        std::numeric_limits<double>::quiet_NaN());
  out.scale = 2.0;  // plot convention: twice the relative profile

  if (param == Parameterization::cp) {
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      if (!(std::abs(grid(i)) < gmax))
        throw ParameterError("gamma grid point outside (-gamma_max, gamma_max)");
    // Anchor the sweep at the unconstrained MLE, then move outward with warm
    // starts so neighboring solutions seed each other.
    const MleResult anchor = mle_fixed(data, family, FixedCp{}, opts);
    Eigen::Index start_idx = 0;
    (grid.array() - anchor.params.gamma).abs().minCoeff(&start_idx);

    auto solve_at = [&](Eigen::Index i, const CpParams* warm) {
      FixedCp fixed;
      fixed.gamma = grid(i);
      const MleResult r = mle_fixed(data, family, fixed, opts, warm);
      if (r.converged)
        out.value(i) = r.loglik;
      else
        out.failed.push_back(static_cast<int>(i));
      return r.params;
    };

    CpParams warm = anchor.params;
    for (Eigen::Index i = start_idx; i < grid.size(); ++i) warm = solve_at(i, &warm);
    warm = anchor.params;
    for (Eigen::Index i = start_idx; i-- > 0;) warm = solve_at(i, &warm);
  } else {
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      FixedDp fixed;
      fixed.lambda = grid(i);
      const MleResultDp r = mle_fixed_dp(data, family, fixed, opts);
      if (r.converged)
        out.value(i) = r.loglik;
      else
        out.failed.push_back(static_cast<int>(i));
    }
  }

  finalize_relative(out);
  return out;
}

ProfileGrid profile_nu(const RegressionData& data, Family family,
                       const Eigen::MatrixXd& grid, const MleOptions& opts) {
  if (grid.cols() != shape_dim(family))
    throw ParameterError("nu grid dimension does not match the family");
  ProfileGrid out;
  out.axis = shape_dim(family) == 2 ? "nu1,nu2" : "nu";
  out.points = grid;
  out.value = Eigen::VectorXd::Constant(grid.rows(),
                                        std::numeric_limits<double>::quiet_NaN());
  out.scale = 1.0;

  const CpParams* warm = nullptr;
  CpParams last;
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    FixedCp fixed;
    std::vector<double> nu(grid.cols());
    for (Eigen::Index j = 0; j < grid.cols(); ++j) nu[j] = grid(i, j);
    validate_shape(family, nu);
    fixed.nu = nu;
    const MleResult r = mle_fixed(data, family, fixed, opts, warm);
    if (r.converged) {
      out.value(i) = r.loglik;
      last = r.params;
      warm = &last;
    } else {
      out.failed.push_back(static_cast<int>(i));
    }
  }
  finalize_relative(out);
  return out;
}

}  // namespace csmsn
