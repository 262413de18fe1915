#ifndef CSMSN_ERRORS_HPP
#define CSMSN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csmsn {

// Error taxonomy maps onto the CLI exit codes: data 2, numeric 3, config 4.

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg, double attained_error = 0.0)
      : std::runtime_error(msg), attained_error(attained_error) {}
  double attained_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace csmsn

#endif
