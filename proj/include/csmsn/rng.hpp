#ifndef CSMSN_RNG_HPP
#define CSMSN_RNG_HPP

#include <cstdint>
#include <random>

namespace csmsn {

// One stream per chain/replica/worker. Distinct (seed, stream_id) pairs are
// expanded through SplitMix64 into independent mt19937_64 states, so streams
// can be handed to different threads without any shared generator state.
// The same pair always reproduces the identical draw sequence: all
// distributional transforms below are our own (no std::*_distribution, whose
// output is implementation-defined).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1).
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via the inverse-CDF transform (one uniform per draw).
  double normal();
  double normal(double mean, double sd);

  double exponential(double rate = 1.0);

  // gamma(shape, rate); Marsaglia-Tsang squeeze, shape-boost for shape < 1.
  double gamma(double shape, double rate);

  double beta(double a, double b);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace csmsn

#endif
