#ifndef CSMSN_TEST_UTIL_HPP
#define CSMSN_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

// Shared statistical helpers for the test suites. These stay independent of
// the library code paths they are used to check.

namespace testutil {

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (static_cast<double>(x.size()) - 1.0);
}

inline double skewness(const std::vector<double>& x) {
  const double m = mean(x);
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    m2 += (v - m) * (v - m);
    m3 += (v - m) * (v - m) * (v - m);
  }
  m2 /= static_cast<double>(x.size());
  m3 /= static_cast<double>(x.size());
  return m3 / std::pow(m2, 1.5);
}

// One-sample Kolmogorov-Smirnov distance against a CDF.
inline double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::abs(f - (i + 1) / n));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

// Two-sample KS distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Grid-normalized CDF of an unnormalized log kernel on [lo, hi]; returns a
// callable carrying the grid (trapezoid normalization).
struct GridCdf {
  std::vector<double> xs, cdf;
  double operator()(double x) const {
    if (x <= xs.front()) return 0.0;
    if (x >= xs.back()) return 1.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = it - xs.begin() - 1;
    const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
    return cdf[k] + t * (cdf[k + 1] - cdf[k]);
  }
};

inline GridCdf grid_cdf(const std::function<double(double)>& log_kernel, double lo,
                        double hi, int points = 2001) {
  GridCdf g;
  g.xs.resize(points);
  std::vector<double> lk(points);
  double mx = -1e308;
  for (int i = 0; i < points; ++i) {
    g.xs[i] = lo + (hi - lo) * i / (points - 1);
    lk[i] = log_kernel(g.xs[i]);
    mx = std::max(mx, lk[i]);
  }
  std::vector<double> f(points);
  for (int i = 0; i < points; ++i) f[i] = std::exp(lk[i] - mx);
  g.cdf.assign(points, 0.0);
  for (int i = 1; i < points; ++i)
    g.cdf[i] = g.cdf[i - 1] + 0.5 * (f[i] + f[i - 1]) * (g.xs[i] - g.xs[i - 1]);
  const double total = g.cdf.back();
  for (double& v : g.cdf) v /= total;
  return g;
}


// Generic random-walk MH on a transformed scale; used to check that stated
// kernels are proper targets of the samplers built on them.
template <typename LogKernel, typename Fwd, typename Bwd, typename Jac, typename Rng>
std::vector<double> mh_chain(LogKernel logk, Fwd to_x, Bwd to_v, Jac log_jac,
                             double v0, double step, int n, Rng& rng) {
  std::vector<double> out;
  out.reserve(n);
  double v = v0;
  double x = to_x(v0);
  for (int i = 0; i < n; ++i) {
    const double xp = x + step * rng.normal();
    const double vp = to_v(xp);
    const double lr = logk(vp) - logk(v) + log_jac(vp) - log_jac(v);
    if (std::log(rng.uniform()) < lr) {
      x = xp;
      v = vp;
    }
    out.push_back(v);
  }
  return out;
}

// Batch-means standard error for a (possibly autocorrelated) chain.
inline double batch_se(const std::vector<double>& x, int n_batches = 30) {
  const std::size_t bs = x.size() / n_batches;
  std::vector<double> bm;
  for (int b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) s += x[i];
    bm.push_back(s / static_cast<double>(bs));
  }
  return std::sqrt(variance(bm) / n_batches);
}

}  // namespace testutil

#endif
