#ifndef CSMSN_QUADRATURE_HPP
#define CSMSN_QUADRATURE_HPP

#include <functional>

namespace csmsn {

// Tolerances for the one-dimensional mixing integrals. Integrands are smooth
// and unimodal in u, so an adaptive Gauss-Kronrod rule reaches these cheaply.
struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 15;  // adaptive bisection depth
};

// Adaptive Gauss-Kronrod (G7,K15) integral of f over the finite interval
// (a, b). Throws NumericError carrying the attained error estimate when the
// tolerance cannot be met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadSpec& spec = {});

// log of the integral of exp(log_f) over (a, b), max-shifted so the linear
// integration never under- or overflows. The shift is located on a probe
// grid before handing off to the adaptive rule. Returns -inf for an
// identically -inf integrand.
double log_integrate(const std::function<double(double)>& log_f, double a,
                     double b, const QuadSpec& spec = {}, int probe_points = 65);

// log of the integral of exp(log_f(u)) du over u in (0, u_max), u_max
// possibly infinite. Works on the x = log(u) scale, which turns the
// u^(a-1)-type endpoint behavior of the mixing integrands into an analytic
// bump with exponential decay, then max-shifts and truncates where the
// integrand has fallen ~70 log units below its peak.
double log_integrate_positive(const std::function<double(double)>& log_f,
                              double u_max, const QuadSpec& spec = {});

}  // namespace csmsn

#endif
