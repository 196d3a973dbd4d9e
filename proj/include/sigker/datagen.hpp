#pragma once

#include <cstdint>
#include <cstddef>

#include "sigker/time_series.hpp"

namespace sigker::datagen {

/// Portable PRNG pinned for cross-platform reproducibility: xoshiro256++
/// seeded through splitmix64 (Blackman & Vigna). Uniform doubles take the
/// top 53 bits of each output, so identical seeds give identical streams on
/// any IEEE-754 platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1): (next_u64() >> 11) * 2^-53.
  double uniform01();

  // Standard normal via the polar (Marsaglia) Box-Muller variant:
  // draw u, v uniform on (-1,1) until 0 < s = u^2 + v^2 < 1, then return
  // u * sqrt(-2 ln(s) / s) and cache v * sqrt(-2 ln(s) / s) as the spare.
  double gaussian();

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Brownian path on [0,1]: d independent coordinates of cumulative iid
// Gaussian steps with variance 1/(length-1), starting at the origin. Steps
// are drawn coordinate-minor (all coordinates of step k before step k+1).
TimeSeries brownian(std::size_t length, std::size_t dim, std::uint64_t seed);

// Fractional Brownian path with Hurst index hurst in (0,1), exact in
// distribution: per coordinate a Cholesky factor of the fBm covariance
// 0.5 (s^{2H} + t^{2H} - |s-t|^{2H}) on the uniform grid is applied to iid
// Gaussians (coordinate-major draw order: coordinate 0's vector first).
// length is capped at 4096 (dense Cholesky budget). Factorization failure
// raises NumericError suggesting jitter.
TimeSeries fbm(std::size_t length, std::size_t dim, double hurst, std::uint64_t seed);

// Per-coordinate sinusoid amplitude * sin(2 pi t / period + phase) with a
// uniform random phase per coordinate, plus iid Gaussian noise of standard
// deviation `noise`, sampled at t = k/(length-1). Phases are drawn first
// (coordinate order), then noise coordinate-minor in time order.
TimeSeries near_periodic(std::size_t length, std::size_t dim, double period,
                         double amplitude, double noise, std::uint64_t seed);

}  // namespace sigker::datagen
