#include "csmsn/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "csmsn/errors.hpp"

namespace csmsn {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadSpec& spec) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double error = 0.0;
  const double value =
      GK::integrate(f, a, b, spec.max_subdivisions, spec.rel_tol, &error);
  if (!std::isfinite(value))
    throw NumericError("quadrature produced a non-finite value", error);
  if (error > spec.abs_tol && error > spec.rel_tol * std::abs(value))
    throw NumericError("quadrature did not converge to tolerance", error);
  return value;
}

namespace {

struct Peak {
  double x = 0.0;
  double value = kNegInf;
};

// Coarse probe plus local refinement rounds.
Peak probe_max(const std::function<double(double)>& g, double lo, double hi,
               int points, int rounds) {
  Peak peak;
  double spacing = (hi - lo) / points;
  for (int i = 0; i <= points; ++i) {
    const double x = lo + (hi - lo) * i / points;
    const double v = g(x);
    if (v > peak.value) peak = {x, v};
  }
  if (peak.value == kNegInf) return peak;
  for (int round = 0; round < rounds; ++round) {
    const double a = std::max(lo, peak.x - spacing);
    const double b = std::min(hi, peak.x + spacing);
    spacing = (b - a) / 16.0;
    for (int i = 0; i <= 16; ++i) {
      const double x = a + (b - a) * i / 16.0;
      const double v = g(x);
      if (v > peak.value) peak = {x, v};
    }
  }
  return peak;
}

double shifted_integral(const std::function<double(double)>& g, double shift,
                        double lo, double hi, const QuadSpec& spec) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double error = 0.0;
  // Subdivide toward a tolerance two orders tighter than the contract: the
  // G7/K15 error estimate is conservative, and terminating exactly at the
  // contract leaves the estimate flapping around the acceptance threshold.
  const double value = GK::integrate(
      [&](double x) { return std::exp(g(x) - shift); }, lo, hi,
      spec.max_subdivisions, 1e-2 * spec.rel_tol, &error);
  if (!std::isfinite(value))
    throw NumericError("log-domain quadrature produced a non-finite value", error);
  // The shifted integrand is O(1); demand relative accuracy of the integral
  // (which is the absolute accuracy of its log).
  if (error > spec.rel_tol * std::max(std::abs(value), 1e-6) && error > spec.abs_tol)
    throw NumericError("log-domain quadrature did not converge", error);
  return value;
}

}  // namespace

double log_integrate(const std::function<double(double)>& log_f, double a,
                     double b, const QuadSpec& spec, int probe_points) {
  const Peak peak = probe_max(log_f, a, b, probe_points, 2);
  if (peak.value == kNegInf) return kNegInf;
  const double value = shifted_integral(log_f, peak.value, a, b, spec);
  if (!(value > 0.0)) return kNegInf;
  return peak.value + std::log(value);
}

double log_integrate_positive(const std::function<double(double)>& log_f,
                              double u_max, const QuadSpec& spec) {
  const double x_cap = std::isinf(u_max) ? 700.0 : std::log(u_max);
  // g(x) = log f(e^x) + x, the log-integrand after u = e^x.
  auto g = [&](double x) {
    const double v = log_f(std::exp(x));
    return std::isfinite(v) ? v + x : kNegInf;
  };

  Peak peak = probe_max(g, std::min(-60.0, x_cap - 1.0), std::min(30.0, x_cap), 90, 3);
  if (peak.value == kNegInf) return kNegInf;

  // Truncate where the bump has dropped ~70 log units; expand outward first
  // in case the peak sits at the probe-window edge.
  const double drop = 70.0;
  double lo = peak.x, hi = peak.x;
  while (hi < x_cap && g(hi) > peak.value - drop) {
    hi = std::min(hi + 2.0, x_cap);
    const double v = g(hi);
    if (v > peak.value) peak = {hi, v};
  }
  while (lo > -745.0 && g(lo) > peak.value - drop) {
    lo -= 2.0;
    const double v = g(lo);
    if (v > peak.value) peak = {lo, v};
  }
  if (peak.x >= hi - 2.0 || peak.x <= lo + 2.0) {
    // The maximum moved during expansion: re-locate it on the final window.
    peak = probe_max(g, lo, hi, 90, 3);
  }

  const double value = shifted_integral(g, peak.value, lo, hi, spec);
  if (!(value > 0.0)) return kNegInf;
  return peak.value + std::log(value);
}

}  // namespace csmsn
