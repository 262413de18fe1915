#include "csmsn/studies.hpp"

#include <cmath>
#include <mutex>

#include "csmsn/errors.hpp"
#include "csmsn/parallel.hpp"
#include "csmsn/random.hpp"

namespace csmsn {

namespace {

// Covariates ~ N(0,1), centered in their means; intercept in column 0.
Eigen::MatrixXd simulate_design(int n, int p, RngStream& rng) {
  Eigen::MatrixXd X(n, p);
  X.col(0).setOnes();
  for (int j = 1; j < p; ++j) {
    for (int i = 0; i < n; ++i) X(i, j) = rng.normal();
    X.col(j).array() -= X.col(j).mean();
  }
  return X;
}

// Parameters a recovery report tracks, by family.
std::vector<std::string> tracked_columns(Family family, int p) {
  std::vector<std::string> cols;
  for (int j = 0; j < p; ++j) cols.push_back("beta" + std::to_string(j));
  cols.push_back("delta");
  cols.push_back("gamma");
  if (family != Family::csgt) cols.push_back("sigma2");
  switch (family) {
    case Family::csn: break;
    case Family::cst:
    case Family::css: cols.push_back("nu"); break;
    case Family::cscn:
    case Family::csgt:
      cols.push_back("nu1");
      cols.push_back("nu2");
      break;
  }
  return cols;
}

double true_value(const std::string& name, const CpParams& truth) {
  if (name.rfind("beta", 0) == 0)
    return truth.beta(std::stoi(name.substr(4)));
  if (name == "delta") return delta_from_gamma(truth.gamma);
  if (name == "gamma") return truth.gamma;
  if (name == "sigma2") return truth.sigma2;
  if (name == "nu") return truth.nu[0];
  if (name == "nu1") return truth.nu[0];
  if (name == "nu2") return truth.nu[1];
  throw DataError("no truth for parameter " + name);
}

}  // namespace

RecoveryReport run_recovery(const RecoveryScenario& scenario) {
  validate(scenario.truth);
  const int p = static_cast<int>(scenario.truth.beta.size());
  const auto cols = tracked_columns(scenario.family, p);

  RecoveryReport report;
  report.replicas.resize(scenario.R);
  std::vector<char> ok(scenario.R, 0);

  parallel_for(scenario.R, [&](int r) {
    try {
      // Streams 2r (data) and 2r+1 (chain) keep replicas independent.
      RngStream data_rng(scenario.sampler.seed, 2 * static_cast<std::uint64_t>(r));
      RegressionData data;
      data.X = simulate_design(scenario.n, p, data_rng);
      data.y = simulate_response(data.X, scenario.truth, data_rng);

      SamplerConfig cfg = scenario.sampler;
      cfg.n_chains = 1;
      const Chain chain =
          run_chain(data, scenario.family, scenario.prior, cfg, 2 * r + 1);
      const auto summaries = summarize(chain);

      ReplicaResult res;
      for (const auto& s : summaries) {
        if (std::find(cols.begin(), cols.end(), s.name) == cols.end()) continue;
        res.params[s.name] = {s.estimate, s.ci_lower, s.ci_upper};
      }
      report.replicas[r] = std::move(res);
      ok[r] = 1;
    } catch (const std::exception&) {
      ok[r] = 0;
    }
  });

  std::vector<ReplicaResult> kept;
  for (int r = 0; r < scenario.R; ++r)
    if (ok[r]) kept.push_back(report.replicas[r]);
  report.replicas_used = static_cast<int>(kept.size());
  report.replicas_failed = scenario.R - report.replicas_used;
  if (report.replicas_failed > 0.2 * scenario.R)
    throw NumericError("recovery study: more than 20% of replicas failed");
  report.replicas = kept;

  const double R = static_cast<double>(kept.size());
  for (const auto& name : cols) {
    ParamRecovery row;
    row.name = name;
    row.real = true_value(name, scenario.truth);
    double mean = 0.0, len = 0.0;
    int covered = 0;
    for (const auto& rep : kept) {
      const auto& e = rep.params.at(name);
      mean += e.estimate;
      len += e.ci_upper - e.ci_lower;
      if (e.ci_lower <= row.real && row.real <= e.ci_upper) ++covered;
    }
    mean /= R;
    double var = 0.0;
    for (const auto& rep : kept) {
      const double d = rep.params.at(name).estimate - mean;
      var += d * d;
    }
    var /= std::max(R - 1.0, 1.0);
    row.est = mean;
    row.var = var;
    row.bias = mean - row.real;
    row.rel_bias = row.real != 0.0 ? std::abs(row.bias) / std::abs(row.real)
                                   : std::abs(row.bias);
    row.rmse = std::sqrt(row.bias * row.bias + var);
    row.coverage = covered / R;
    row.ci_length = len / R;
    report.rows.push_back(std::move(row));
  }
  return report;
}

CpParams residual_study_truth(Family family) {
  CpParams truth;
  truth.family = family;
  truth.beta = Eigen::VectorXd(2);
  truth.beta << 1.0, 2.0;
  truth.sigma2 = 1.0;
  truth.gamma = -0.9;
  switch (family) {
    case Family::csn: break;
    case Family::cst: truth.nu = {5.0}; break;
    case Family::css: truth.nu = {3.0}; break;
    case Family::cscn: truth.nu = {0.5, 0.5}; break;
    case Family::csgt: truth.nu = {15.0, 5.0}; break;
  }
  return truth;
}

ResidualStudyResult run_residual_study(Family gen_family,
                                       const std::vector<Family>& fit_families,
                                       int n, const SamplerConfig& sampler,
                                       int envelope_sims) {
  ResidualStudyResult out;
  out.truth = residual_study_truth(gen_family);

  RngStream data_rng(sampler.seed, 1000);
  out.data.X = simulate_design(n, 2, data_rng);
  out.data.y = simulate_response(out.data.X, out.truth, data_rng);

  out.fits.resize(fit_families.size());
  parallel_for(static_cast<int>(fit_families.size()), [&](int k) {
    const Family fit = fit_families[k];
    SamplerConfig cfg = sampler;
    cfg.n_chains = 1;
    const Chain chain = run_chain(out.data, fit, PriorSpec{}, cfg, 1001 + k);
    const auto summaries = summarize(chain);

    Eigen::VectorXd beta_hat(out.data.X.cols());
    double sigma2_hat = 1.0, gamma_hat = 0.0;
    std::vector<double> nu_hat;
    for (const auto& s : summaries) {
      if (s.name.rfind("beta", 0) == 0) beta_hat(std::stoi(s.name.substr(4))) = s.estimate;
      if (s.name == "sigma2") sigma2_hat = s.estimate;
      if (s.name == "gamma") gamma_hat = s.estimate;
    }
    for (const auto& s : summaries) {
      if (s.name == "nu" || s.name == "nu1") nu_hat.insert(nu_hat.begin(), s.estimate);
      if (s.name == "nu2") nu_hat.push_back(s.estimate);
    }
    if (fit == Family::csgt) sigma2_hat = 1.0;

    const CpParams law = fitted_residual_law(fit, gamma_hat, nu_hat);
    const Eigen::VectorXd resid = residuals(out.data, beta_hat, sigma2_hat);
    RngStream env_rng(sampler.seed, 5000 + k);
    ResidualStudyEntry entry;
    entry.fit_family = fit;
    entry.envelope = qq_envelope(resid, law, envelope_sims, env_rng);
    entry.outside = entry.envelope.outside();
    out.fits[k] = std::move(entry);
  });
  return out;
}

}  // namespace csmsn
