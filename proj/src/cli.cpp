#include "csmsn/cli.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "csmsn/diagnostics.hpp"
#include "csmsn/errors.hpp"
#include "csmsn/studies.hpp"

namespace csmsn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

json prior_to_json(const PriorSpec& pr) {
  json j;
  j["mu_beta"] = std::vector<double>(pr.mu_beta.data(),
                                     pr.mu_beta.data() + pr.mu_beta.size());
  std::vector<std::vector<double>> sb(pr.Sigma_beta.rows());
  for (Eigen::Index i = 0; i < pr.Sigma_beta.rows(); ++i)
    sb[i] = std::vector<double>(pr.Sigma_beta.row(i).begin(),
                                pr.Sigma_beta.row(i).end());
  j["Sigma_beta"] = sb;
  j["mu_Delta"] = pr.mu_Delta;
  j["sigma2_Delta"] = pr.sigma2_Delta;
  j["c"] = pr.c;
  j["d"] = pr.d;
  j["cst_rho0"] = pr.cst_rho0;
  j["cst_rho1"] = pr.cst_rho1;
  j["css_alpha1"] = pr.css_alpha1;
  if (pr.css_alpha2) j["css_alpha2"] = *pr.css_alpha2;
  j["css_theta_lo"] = pr.css_theta_lo;
  j["css_theta_hi"] = pr.css_theta_hi;
  j["cscn_alpha1"] = pr.cscn_alpha1;
  j["cscn_beta1"] = pr.cscn_beta1;
  j["cscn_alpha2"] = pr.cscn_alpha2;
  j["cscn_beta2"] = pr.cscn_beta2;
  j["csgt_rho0"] = pr.csgt_rho0;
  j["csgt_rho1"] = pr.csgt_rho1;
  j["csgt_psi0"] = pr.csgt_psi0;
  j["csgt_psi1"] = pr.csgt_psi1;
  return j;
}

PriorSpec prior_from_json(const json& j) {
  PriorSpec pr;
  for (const auto& [key, val] : j.items()) {
    if (key == "mu_beta") {
      const auto v = val.get<std::vector<double>>();
      pr.mu_beta = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    } else if (key == "Sigma_beta") {
      const auto m = val.get<std::vector<std::vector<double>>>();
      pr.Sigma_beta.resize(m.size(), m.empty() ? 0 : m[0].size());
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != m[0].size())
          throw ConfigError("Sigma_beta rows have unequal lengths");
        for (std::size_t k = 0; k < m[i].size(); ++k) pr.Sigma_beta(i, k) = m[i][k];
      }
    } else if (key == "mu_Delta") pr.mu_Delta = val.get<double>();
    else if (key == "sigma2_Delta") pr.sigma2_Delta = val.get<double>();
    else if (key == "c") pr.c = val.get<double>();
    else if (key == "d") pr.d = val.get<double>();
    else if (key == "cst_rho0") pr.cst_rho0 = val.get<double>();
    else if (key == "cst_rho1") pr.cst_rho1 = val.get<double>();
    else if (key == "css_alpha1") pr.css_alpha1 = val.get<double>();
    else if (key == "css_alpha2") pr.css_alpha2 = val.get<double>();
    else if (key == "css_theta_lo") pr.css_theta_lo = val.get<double>();
    else if (key == "css_theta_hi") pr.css_theta_hi = val.get<double>();
    else if (key == "cscn_alpha1") pr.cscn_alpha1 = val.get<double>();
    else if (key == "cscn_beta1") pr.cscn_beta1 = val.get<double>();
    else if (key == "cscn_alpha2") pr.cscn_alpha2 = val.get<double>();
    else if (key == "cscn_beta2") pr.cscn_beta2 = val.get<double>();
    else if (key == "csgt_rho0") pr.csgt_rho0 = val.get<double>();
    else if (key == "csgt_rho1") pr.csgt_rho1 = val.get<double>();
    else if (key == "csgt_psi0") pr.csgt_psi0 = val.get<double>();
    else if (key == "csgt_psi1") pr.csgt_psi1 = val.get<double>();
    else throw ConfigError("unknown prior key '" + key + "'");
  }
  return pr;
}

json config_to_json(const SamplerConfig& cfg, const DesignSpec& design,
                    int envelope_sims) {
  json j;
  j["iterations"] = cfg.iterations;
  j["burn_in"] = cfg.burn_in;
  j["thin"] = cfg.thin;
  j["n_chains"] = cfg.n_chains;
  j["seed"] = cfg.seed;
  j["adapt_window"] = cfg.adapt_window;
  j["target_accept"] = cfg.target_accept;
  j["response"] = design.response;
  j["covariates"] = design.covariates;
  j["intercept"] = design.intercept;
  j["center"] = design.center;
  j["envelope_sims"] = envelope_sims;
  return j;
}

json acceptance_to_json(const std::map<std::string, AcceptanceStat>& ledger) {
  json j = json::object();
  for (const auto& [name, st] : ledger) {
    j[name] = {{"proposals", st.proposals},
               {"accepts", st.accepts},
               {"rate", st.rate()},
               {"step", st.step}};
  }
  return j;
}

// Shared by fit and diagnose so a persisted chain reproduces the fit-time
// report bit for bit.
json build_report(const std::vector<Chain>& chains, const RegressionData& data,
                  const json& config_echo, const json& prior_echo,
                  const json& acceptance_echo,
                  const std::vector<std::string>& design_columns) {
  const auto summaries = summarize(chains);
  const Eigen::MatrixXd loglik = obs_loglik(chains, data);
  const CpoResult cp = cpo(loglik);
  const CriteriaReport crit = criteria(loglik, chains, data);
  const Eigen::VectorXd kl = kl_influence(loglik, cp);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["family"] = family_name(chains.front().family);
  j["config"] = config_echo;
  j["prior"] = prior_echo;
  j["acceptance"] = acceptance_echo;
  j["data"] = {{"n", static_cast<long>(data.y.size())},
               {"p", static_cast<long>(data.X.cols())},
               {"design_columns", design_columns}};

  json summ = json::object();
  for (const auto& s : summaries) {
    summ[s.name] = {{"estimate", s.estimate},   {"statistic", stat_name(s.statistic)},
                    {"mean", s.mean},           {"sd", s.sd},
                    {"median", s.median},       {"mode", s.mode},
                    {"ci_lower", s.ci_lower},   {"ci_upper", s.ci_upper}};
  }
  j["summaries"] = summ;

  j["criteria"] = {{"EAIC", crit.EAIC}, {"EBIC", crit.EBIC}, {"DIC", crit.DIC},
                   {"pD", crit.pD},     {"LPML", crit.LPML}, {"k", crit.k},
                   {"n", crit.n}};

  std::vector<double> log_cpo(cp.log_cpo.data(), cp.log_cpo.data() + cp.log_cpo.size());
  std::vector<double> kls(kl.data(), kl.data() + kl.size());
  std::vector<double> ps;
  std::vector<long> influential;
  for (Eigen::Index i = 0; i < kl.size(); ++i) {
    ps.push_back(calibrate(kl(i)));
    if (ps.back() >= 0.8) influential.push_back(i);
  }
  j["influence"] = {{"log_cpo", log_cpo},
                    {"kl", kls},
                    {"calibration_p", ps},
                    {"influential", influential}};
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw DataError("write failed for '" + path + "'");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

std::string meta_path_for(const std::string& chain_path) {
  std::string base = chain_path;
  const auto pos = base.rfind(".csv");
  if (pos != std::string::npos) base = base.substr(0, pos);
  return base + "_meta.json";
}

// Point estimates needed for residuals/envelope, from the summary table.
struct PointEstimates {
  Eigen::VectorXd beta;
  double sigma2 = 1.0;
  double gamma = 0.0;
  std::vector<double> nu;
};

PointEstimates point_estimates(const std::vector<ParamSummary>& summaries,
                               Family family, int p) {
  PointEstimates pe;
  pe.beta.resize(p);
  for (const auto& s : summaries) {
    if (s.name.rfind("beta", 0) == 0)
      pe.beta(std::stoi(s.name.substr(4))) = s.estimate;
    else if (s.name == "sigma2") pe.sigma2 = s.estimate;
    else if (s.name == "gamma") pe.gamma = s.estimate;
  }
  pe.nu.resize(shape_dim(family));
  for (const auto& s : summaries) {
    if (s.name == "nu" || s.name == "nu1") pe.nu[0] = s.estimate;
    if (s.name == "nu2") pe.nu[1] = s.estimate;
  }
  if (family == Family::csgt) pe.sigma2 = 1.0;
  return pe;
}

}  // namespace

PriorSpec load_prior(const std::string& path) { return prior_from_json(read_json(path)); }

int cmd_fit(const FitOptions& opt) {
  const Dataset ds = read_csv(opt.data_path);
  const Design design = build_design(ds, opt.design);
  PriorSpec prior = opt.prior_path.empty() ? PriorSpec{} : load_prior(opt.prior_path);
  prior.resolve(static_cast<int>(design.data.X.cols()));

  const std::vector<Chain> chains =
      run_chains(design.data, opt.family, prior, opt.sampler);

  fs::create_directories(opt.out_dir);
  const std::string chain_path = (fs::path(opt.out_dir) / "chain.csv").string();
  write_chains_csv(chain_path, chains);

  json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["family"] = family_name(opt.family);
  meta["columns"] = chains.front().columns;
  meta["config"] = config_to_json(opt.sampler, opt.design, opt.envelope_sims);
  meta["prior"] = prior_to_json(prior);
  json acc = json::object();
  for (const auto& c : chains)
    acc["chain" + std::to_string(c.chain_id)] = acceptance_to_json(c.acceptance);
  meta["acceptance"] = acc;
  meta["design_columns"] = design.column_names;
  write_json(meta_path_for(chain_path), meta);

  const json report = build_report(chains, design.data, meta["config"], meta["prior"],
                                   meta["acceptance"], design.column_names);
  write_json((fs::path(opt.out_dir) / "report.json").string(), report);

  // Residuals and envelope from the policy point estimates.
  const auto summaries = summarize(chains);
  const PointEstimates pe = point_estimates(summaries, opt.family,
                                            static_cast<int>(design.data.X.cols()));
  const Eigen::VectorXd resid = residuals(design.data, pe.beta, pe.sigma2);
  Eigen::MatrixXd rtab(resid.size(), 2);
  for (Eigen::Index i = 0; i < resid.size(); ++i) {
    rtab(i, 0) = static_cast<double>(i);
    rtab(i, 1) = resid(i);
  }
  write_csv((fs::path(opt.out_dir) / "residuals.csv").string(), {"index", "residual"},
            rtab);

  const CpParams law = fitted_residual_law(opt.family, pe.gamma, pe.nu);
  RngStream env_rng(opt.sampler.seed, 9000);
  const EnvelopeTable env = qq_envelope(resid, law, opt.envelope_sims, env_rng);
  Eigen::MatrixXd etab(env.observed.size(), 5);
  for (Eigen::Index i = 0; i < env.observed.size(); ++i) {
    etab(i, 0) = static_cast<double>(i + 1);
    etab(i, 1) = env.observed(i);
    etab(i, 2) = env.lo(i);
    etab(i, 3) = env.mid(i);
    etab(i, 4) = env.hi(i);
  }
  write_csv((fs::path(opt.out_dir) / "envelope.csv").string(),
            {"order", "observed", "lo", "mid", "hi"}, etab);
  return 0;
}

int cmd_simulate(const SimulateOptions& opt) {
  if (opt.beta.size() < 1) throw ConfigError("simulate: beta must have length >= 1");
  CpParams truth;
  truth.family = opt.family;
  truth.beta = opt.beta;
  truth.sigma2 = opt.sigma2;
  truth.gamma = opt.gamma;
  truth.nu = opt.nu;
  validate(truth);

  const int p = static_cast<int>(opt.beta.size());
  RngStream rng(opt.seed, 0);
  Eigen::MatrixXd X(opt.n, p);
  X.col(0).setOnes();
  for (int j = 1; j < p; ++j) {
    for (int i = 0; i < opt.n; ++i) X(i, j) = rng.normal();
    X.col(j).array() -= X.col(j).mean();
  }
  const Eigen::VectorXd y = simulate_response(X, truth, rng);

  std::vector<std::string> cols{"y"};
  Eigen::MatrixXd out(opt.n, p);  // y plus the p-1 covariates
  out.col(0) = y;
  for (int j = 1; j < p; ++j) {
    cols.push_back("x" + std::to_string(j));
    out.col(j) = X.col(j);
  }
  if (const auto dir = fs::path(opt.out_path).parent_path(); !dir.empty())
    fs::create_directories(dir);
  write_csv(opt.out_path, cols, out);
  return 0;
}

namespace {

// "lo:hi:count" -> linspace
Eigen::VectorXd parse_axis_spec(const std::string& spec) {
  double lo, hi;
  int count;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 ||
      !(lo < hi))
    throw ConfigError("bad grid spec '" + spec + "' (want lo:hi:count)");
  Eigen::VectorXd g(count);
  for (int i = 0; i < count; ++i) g(i) = lo + (hi - lo) * i / (count - 1);
  return g;
}

}  // namespace

int cmd_profile(const ProfileOptions& opt) {
  const Dataset ds = read_csv(opt.data_path);
  const Design design = build_design(ds, opt.design);

  ProfileGrid grid;
  if (opt.axis == "gamma" || opt.axis == "lambda") {
    const Parameterization param =
        opt.axis == "lambda" ? Parameterization::dp : opt.parameterization;
    grid = profile_skewness(design.data, opt.family, parse_axis_spec(opt.grid), param);
  } else if (opt.axis == "nu") {
    const auto comma = opt.grid.find(',');
    Eigen::MatrixXd points;
    if (shape_dim(opt.family) == 2) {
      if (comma == std::string::npos)
        throw ConfigError("family needs a 2-D nu grid 'lo:hi:n,lo:hi:n'");
      const Eigen::VectorXd g1 = parse_axis_spec(opt.grid.substr(0, comma));
      const Eigen::VectorXd g2 = parse_axis_spec(opt.grid.substr(comma + 1));
      points.resize(g1.size() * g2.size(), 2);
      Eigen::Index r = 0;
      for (Eigen::Index i = 0; i < g1.size(); ++i)
        for (Eigen::Index j = 0; j < g2.size(); ++j) {
          points(r, 0) = g1(i);
          points(r, 1) = g2(j);
          ++r;
        }
    } else if (shape_dim(opt.family) == 1) {
      points = parse_axis_spec(opt.grid);
    } else {
      throw ConfigError("family csn has no nu axis to profile");
    }
    grid = profile_nu(design.data, opt.family, points);
  } else {
    throw ConfigError("unknown profile axis '" + opt.axis + "'");
  }

  std::vector<std::string> cols;
  if (grid.points.cols() == 2)
    cols = {"nu1", "nu2"};
  else
    cols = {grid.axis};
  cols.push_back("value");
  cols.push_back("converged");
  Eigen::MatrixXd out(grid.points.rows(), grid.points.cols() + 2);
  out.leftCols(grid.points.cols()) = grid.points;
  for (Eigen::Index i = 0; i < grid.value.size(); ++i) {
    out(i, grid.points.cols()) = grid.value(i);
    const bool failed =
        std::find(grid.failed.begin(), grid.failed.end(), static_cast<int>(i)) !=
        grid.failed.end();
    out(i, grid.points.cols() + 1) = failed ? 0.0 : 1.0;
  }
  if (const auto dir = fs::path(opt.out_path).parent_path(); !dir.empty())
    fs::create_directories(dir);
  write_csv(opt.out_path, cols, out);
  return 0;
}

int cmd_diagnose(const DiagnoseOptions& opt) {
  const json meta = read_json(meta_path_for(opt.chain_path));
  if (!meta.contains("family") || !meta.contains("config"))
    throw ConfigError("chain sidecar is missing family/config");
  const Family family = family_from_name(meta["family"].get<std::string>());

  SamplerConfig cfg;
  const json& jc = meta["config"];
  cfg.iterations = jc["iterations"].get<long>();
  cfg.burn_in = jc["burn_in"].get<long>();
  cfg.thin = jc["thin"].get<long>();
  cfg.n_chains = jc["n_chains"].get<int>();
  cfg.seed = jc["seed"].get<std::uint64_t>();
  cfg.adapt_window = jc["adapt_window"].get<long>();
  cfg.target_accept = jc["target_accept"].get<double>();

  DesignSpec dspec;
  dspec.response = jc["response"].get<std::string>();
  dspec.covariates = jc["covariates"].get<std::vector<std::string>>();
  dspec.intercept = jc["intercept"].get<bool>();
  dspec.center = jc["center"].get<bool>();

  const Dataset ds = read_csv(opt.data_path);
  const Design design = build_design(ds, dspec);
  const std::vector<Chain> chains = read_chains_csv(opt.chain_path, family, cfg);

  const json report = build_report(chains, design.data, meta["config"], meta["prior"],
                                   meta["acceptance"],
                                   meta["design_columns"].get<std::vector<std::string>>());
  fs::create_directories(opt.out_dir);
  write_json((fs::path(opt.out_dir) / "report.json").string(), report);
  return 0;
}

int cmd_recover(const RecoverOptions& opt) {
  RecoveryScenario sc;
  sc.family = opt.family;
  sc.n = opt.n;
  sc.R = opt.R;
  sc.truth.family = opt.family;
  sc.truth.beta = opt.beta;
  sc.truth.sigma2 = opt.sigma2;
  sc.truth.gamma = opt.gamma;
  sc.truth.nu = opt.nu;
  validate(sc.truth);
  if (!opt.prior_path.empty()) sc.prior = load_prior(opt.prior_path);
  sc.sampler = opt.sampler;

  const RecoveryReport rep = run_recovery(sc);

  fs::create_directories(opt.out_dir);
  Eigen::MatrixXd tab(rep.rows.size(), 8);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    names.push_back(r.name);
    tab(i, 0) = r.real;
    tab(i, 1) = r.est;
    tab(i, 2) = r.var;
    tab(i, 3) = r.bias;
    tab(i, 4) = r.rel_bias;
    tab(i, 5) = r.rmse;
    tab(i, 6) = r.coverage;
    tab(i, 7) = r.ci_length;
  }
  {
    std::ofstream out((fs::path(opt.out_dir) / "recovery.csv").string());
    if (!out) throw DataError("cannot write recovery.csv");
    out << "parameter,real,est,var,bias,rel_bias,rmse,cr,length_ci\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      out << names[i];
      for (int j = 0; j < 8; ++j) out << "," << format_double(tab(i, j));
      out << "\n";
    }
  }
  {
    std::ofstream out((fs::path(opt.out_dir) / "recovery_replicas.csv").string());
    if (!out) throw DataError("cannot write recovery_replicas.csv");
    out << "replica,parameter,estimate,ci_lower,ci_upper\n";
    for (std::size_t r = 0; r < rep.replicas.size(); ++r)
      for (const auto& [name, e] : rep.replicas[r].params)
        out << r << "," << name << "," << format_double(e.estimate) << ","
            << format_double(e.ci_lower) << "," << format_double(e.ci_upper) << "\n";
  }
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DataError*>(&e)) return 2;
  if (dynamic_cast<const ConfigError*>(&e)) return 4;
  if (dynamic_cast<const ParameterError*>(&e)) return 4;
  if (dynamic_cast<const NumericError*>(&e)) return 3;
  return 3;
}

}  // namespace csmsn
