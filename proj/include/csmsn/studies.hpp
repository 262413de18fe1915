#ifndef CSMSN_STUDIES_HPP
#define CSMSN_STUDIES_HPP

#include <map>
#include <string>
#include <vector>

#include "csmsn/diagnostics.hpp"
#include "csmsn/mcmc.hpp"

// Desk-scale replication harness for the simulation studies: parameter
// recovery statistics over replicated fits, and the residual
// misspecification study.

namespace csmsn {

struct RecoveryScenario {
  Family family = Family::cst;
  int n = 500;
  int R = 10;
  CpParams truth;  // truth.beta drives the covariate count (p-1 covariates)
  PriorSpec prior;
  SamplerConfig sampler;  // seed is the base; replica r uses streams (2r, 2r+1)
};

struct IntervalEstimate {
  double estimate;
  double ci_lower, ci_upper;
};

struct ReplicaResult {
  std::map<std::string, IntervalEstimate> params;
};

struct ParamRecovery {
  std::string name;
  double real;
  double est;       // mean of the replica estimates
  double var;       // sample variance of the estimates (R-1 denominator)
  double bias;      // est - real
  double rel_bias;  // |bias| / |real| (|bias| when real == 0)
  double rmse;      // sqrt(bias^2 + var)
  double coverage;  // fraction of replica CIs containing real
  double ci_length; // mean CI length
};

struct RecoveryReport {
  std::vector<ParamRecovery> rows;
  std::vector<ReplicaResult> replicas;  // persisted per-replica estimates/CIs
  int replicas_used = 0;
  int replicas_failed = 0;
};

// Simulate R replica datasets (standard-normal covariates, mean-centered),
// fit each with the scenario's sampler, summarize with the per-family
// statistic policy, and aggregate. Replicas run in parallel; a failed replica
// is recorded and excluded, and more than 20% failures is fatal.
RecoveryReport run_recovery(const RecoveryScenario& scenario);

struct ResidualStudyEntry {
  Family fit_family;
  EnvelopeTable envelope;
  int outside = 0;
};

struct ResidualStudyResult {
  RegressionData data;
  CpParams truth;
  std::vector<ResidualStudyEntry> fits;
};

// One dataset from gen_family at the residual-study truth (beta = (1,2),
// sigma2 = 1, gamma = -0.9, family-specific nu), fitted by each family in
// fit_families; emits the envelope table and outside-band count per fit.
ResidualStudyResult run_residual_study(Family gen_family,
                                       const std::vector<Family>& fit_families,
                                       int n, const SamplerConfig& sampler,
                                       int envelope_sims = 100);

// The residual-study truth for a generating family (section-5 values).
CpParams residual_study_truth(Family family);

}  // namespace csmsn

#endif
