#include "csmsn/params.hpp"

#include <cmath>

#include "csmsn/errors.hpp"
#include "csmsn/special.hpp"

namespace csmsn {

std::string family_name(Family f) {
  switch (f) {
    case Family::csn: return "csn";
    case Family::cst: return "cst";
    case Family::css: return "css";
    case Family::cscn: return "cscn";
    case Family::csgt: return "csgt";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "csn") return Family::csn;
  if (name == "cst") return Family::cst;
  if (name == "css") return Family::css;
  if (name == "cscn") return Family::cscn;
  if (name == "csgt") return Family::csgt;
  throw ConfigError("unknown family '" + name + "' (expected csn|cst|css|cscn|csgt)");
}

int shape_dim(Family f) {
  switch (f) {
    case Family::csn: return 0;
    case Family::cst:
    case Family::css: return 1;
    case Family::cscn:
    case Family::csgt: return 2;
  }
  return 0;
}

const Constants& constants() {
  static const Constants c = [] {
    Constants k;
    k.b = std::sqrt(2.0 / M_PI);
    k.b2 = 2.0 / M_PI;
    k.s = std::pow(2.0 / (4.0 - M_PI), 1.0 / 3.0);
    k.gamma_max = 0.5 * (4.0 - M_PI) * k.b * k.b2 / std::pow(1.0 - k.b2, 1.5);
    return k;
  }();
  return c;
}

double CpParams::mu() const {
  if (beta.size() != 1)
    throw ParameterError("CpParams::mu(): beta is not intercept-only");
  return beta(0);
}

double WorkParams::delta() const { return Delta / std::sqrt(tau + Delta * Delta); }

double WorkParams::sigma2() const {
  return tau + Delta * Delta * (1.0 - constants().b2);
}

void validate_shape(Family f, const std::vector<double>& nu) {
  if (static_cast<int>(nu.size()) != shape_dim(f))
    throw ParameterError("shape vector has wrong length for family " + family_name(f));
  switch (f) {
    case Family::csn: break;
    case Family::cst:
      if (!(nu[0] > 2.0)) throw ParameterError("cst requires nu > 2 (finite variance)");
      break;
    case Family::css:
      if (!(nu[0] > 1.0)) throw ParameterError("css requires nu > 1");
      break;
    case Family::cscn:
      if (!(nu[0] > 0.0 && nu[0] < 1.0 && nu[1] > 0.0 && nu[1] < 1.0))
        throw ParameterError("cscn requires nu1, nu2 in (0,1)");
      break;
    case Family::csgt:
      if (!(nu[0] > 2.0 && nu[1] > 0.0))
        throw ParameterError("csgt requires nu1 > 2 and nu2 > 0");
      break;
  }
}

void validate(const CpParams& p) {
  if (!(p.sigma2 > 0.0)) throw ParameterError("sigma2 must be positive");
  if (!(std::abs(p.gamma) < constants().gamma_max))
    throw ParameterError("skewness out of range: |gamma| must be < gamma_max");
  if (p.family == Family::csgt && p.sigma2 != 1.0)
    throw ParameterError("csgt carries sigma2 = 1 (identifiability fix)");
  validate_shape(p.family, p.nu);
}

double delta_from_gamma(double gamma) {
  const auto& k = constants();
  if (!(std::abs(gamma) < k.gamma_max))
    throw ParameterError("skewness out of range: |gamma| must be < gamma_max");
  const double t = k.s * signed_cbrt(gamma);
  return t / (k.b * std::sqrt(1.0 + t * t));
}

double gamma_from_delta(double delta) {
  const auto& k = constants();
  const double bd = k.b * delta;
  return 0.5 * (4.0 - M_PI) * bd * bd * bd / std::pow(1.0 - bd * bd, 1.5);
}

double lambda_from_delta(double delta) {
  if (!(delta > -1.0 && delta < 1.0))
    throw ParameterError("delta must lie in (-1,1)");
  return delta / std::sqrt(1.0 - delta * delta);
}

DpParams cp_to_dp(const CpParams& p) {
  validate(p);
  const auto& k = constants();
  const double sigma = std::sqrt(p.sigma2);
  const double t = k.s * signed_cbrt(p.gamma);  // s * gamma^(1/3), signed root
  DpParams d;
  d.xi = p.mu() - sigma * t;
  d.omega = sigma * std::sqrt(1.0 + t * t);
  d.lambda = t / std::sqrt(k.b2 + t * t * (k.b2 - 1.0));
  d.family = p.family;
  d.nu = p.nu;
  return d;
}

CpParams dp_to_cp(const DpParams& p) {
  if (!(p.omega > 0.0)) throw ParameterError("omega must be positive");
  const auto& k = constants();
  const double delta = delta_from_lambda(p.lambda);
  CpParams c;
  c.beta = Eigen::VectorXd::Constant(1, p.xi + p.omega * k.b * delta);
  c.sigma2 = p.omega * p.omega * (1.0 - k.b2 * delta * delta);
  c.gamma = gamma_from_delta(delta);
  c.family = p.family;
  c.nu = p.nu;
  return c;
}

CpParams work_to_cp(const WorkParams& w, Family family) {
  if (!(w.tau > 0.0)) throw ParameterError("tau must be positive");
  CpParams p;
  p.beta = w.beta;
  p.sigma2 = (family == Family::csgt) ? 1.0 : w.sigma2();
  p.gamma = gamma_from_delta(w.delta());
  p.family = family;
  p.nu = w.nu;
  return p;
}

WorkParams cp_to_work(const CpParams& p) {
  validate(p);
  const auto& k = constants();
  const double delta = delta_from_gamma(p.gamma);
  WorkParams w;
  w.beta = p.beta;
  w.nu = p.nu;
  if (p.family == Family::csgt) {
    std::tie(w.Delta, w.tau) = delta_to_work_csgt(delta);
  } else {
    const double sigma = std::sqrt(p.sigma2);
    const double den = 1.0 - k.b2 * delta * delta;
    w.Delta = sigma * delta / std::sqrt(den);
    w.tau = p.sigma2 * (1.0 - delta * delta) / den;
  }
  return w;
}

std::pair<double, double> delta_to_work_csgt(double delta) {
  const double den = 1.0 - constants().b2 * delta * delta;
  return {delta / std::sqrt(den), (1.0 - delta * delta) / den};
}

}  // namespace csmsn
