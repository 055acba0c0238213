#pragma once

#include <complex>
#include <cstdint>

namespace irsuav {

// Deterministic pseudo-random stream: splitmix64 seed expansion feeding an
// xoshiro256++ core. The generator algorithm is fixed so a given seed
// reproduces the same draw sequence on every run. All floating-point helpers
// consume the integer stream in a documented order; the cached Box-Muller
// spare is part of the stream state, so copies replay identically.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Derives an independent stream from (seed, tag). Each component of a run
  // (environment, per-agent init, exploration noise, minibatch sampling)
  // owns its own derived stream.
  static RngStream derive(std::uint64_t seed, std::uint64_t tag);

  std::uint64_t next_u64();

  double uniform01();                    // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // N(0, 1), Box-Muller with spare
  std::complex<double> cnormal();        // CN(0, 1): re, im ~ N(0, 1/2)
  std::size_t index(std::size_t n);      // uniform in [0, n); n >= 1

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace irsuav
