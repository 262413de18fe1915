#ifndef CSMSN_IO_HPP
#define CSMSN_IO_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "csmsn/mcmc.hpp"

// CSV and chain persistence. Dialect: comma separator, required header row,
// '.' decimal point, UTF-8; numbers are written with %.17g so a round-trip
// restores the exact double.

namespace csmsn {

struct Dataset {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;

  Eigen::Index col(const std::string& name) const;
};

// Strict read: ragged rows or non-numeric cells raise DataError with the
// offending row/column.
Dataset read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values);

// Build the regression design from named columns. covariates empty means
// "all except the response". The intercept column is prepended unless
// disabled; centering subtracts each covariate's mean (never the intercept).
struct DesignSpec {
  std::string response;
  std::vector<std::string> covariates;  // empty -> all
  bool intercept = true;
  bool center = false;
};

struct Design {
  RegressionData data;
  std::vector<std::string> column_names;  // names of X columns
};

Design build_design(const Dataset& ds, const DesignSpec& spec);

// Chain persistence: one row per retained draw with leading chain/draw
// indices; the JSON sidecar carries family, config, acceptance and prior.
void write_chains_csv(const std::string& path, const std::vector<Chain>& chains);
std::vector<Chain> read_chains_csv(const std::string& path, Family family,
                                   const SamplerConfig& config);

std::string format_double(double v);

}  // namespace csmsn

#endif
