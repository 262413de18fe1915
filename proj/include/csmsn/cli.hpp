#ifndef CSMSN_CLI_HPP
#define CSMSN_CLI_HPP

#include <string>
#include <vector>

#include "csmsn/io.hpp"
#include "csmsn/mcmc.hpp"
#include "csmsn/profile.hpp"

// Batch commands behind the csmsn CLI. Each cmd_* is a thin orchestration of
// the corresponding modules; all of them are deterministic given the seed.
// Exit codes: 0 ok, 2 data error, 3 numeric error, 4 config error.

namespace csmsn {

struct FitOptions {
  std::string data_path;
  std::string out_dir = ".";
  Family family = Family::csn;
  DesignSpec design;
  SamplerConfig sampler;
  std::string prior_path;  // optional JSON with prior overrides
  int envelope_sims = 100;
};

struct SimulateOptions {
  std::string out_path = "data.csv";
  Family family = Family::csn;
  int n = 100;
  Eigen::VectorXd beta;  // length p; p-1 standard-normal centered covariates
  double sigma2 = 1.0;
  double gamma = 0.0;
  std::vector<double> nu;
  std::uint64_t seed = 20240101;
};

struct ProfileOptions {
  std::string data_path;
  std::string out_path = "profile.csv";
  Family family = Family::csn;
  DesignSpec design;
  std::string axis = "gamma";  // gamma | lambda | nu
  std::string grid;            // "lo:hi:count" (",lo:hi:count" for 2-D nu)
  Parameterization parameterization = Parameterization::cp;
};

struct DiagnoseOptions {
  std::string chain_path;  // expects <chain>_meta.json alongside
  std::string data_path;
  std::string out_dir = ".";
};

struct RecoverOptions {
  std::string out_dir = ".";
  Family family = Family::cst;
  int n = 500;
  int R = 10;
  Eigen::VectorXd beta;
  double sigma2 = 1.0;
  double gamma = -0.9;
  std::vector<double> nu;
  SamplerConfig sampler;
  std::string prior_path;
};

int cmd_fit(const FitOptions& opt);
int cmd_simulate(const SimulateOptions& opt);
int cmd_profile(const ProfileOptions& opt);
int cmd_diagnose(const DiagnoseOptions& opt);
int cmd_recover(const RecoverOptions& opt);

// Prior overrides from a JSON file; unknown keys are rejected.
PriorSpec load_prior(const std::string& path);

int exit_code_for(const std::exception& e);

}  // namespace csmsn

#endif
