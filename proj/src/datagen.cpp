#include "sigker/datagen.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sigker/errors.hpp"

namespace sigker::datagen {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// In-place lower Cholesky; returns false on a non-positive pivot.
bool cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (sum <= 0.0) return false;
        a[i * n + i] = std::sqrt(sum);
      } else {
        a[i * n + j] = sum / a[j * n + j];
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
  }
  return true;
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

TimeSeries brownian(std::size_t length, std::size_t dim, std::uint64_t seed) {
  if (length < 2) throw std::invalid_argument("brownian: length must be >= 2");
  if (dim < 1) throw std::invalid_argument("brownian: dimension must be >= 1");
  Rng rng(seed);
  const double sd = std::sqrt(1.0 / static_cast<double>(length - 1));
  std::vector<double> values(length * dim, 0.0);
  for (std::size_t k = 1; k < length; ++k)
    for (std::size_t c = 0; c < dim; ++c)
      values[k * dim + c] = values[(k - 1) * dim + c] + sd * rng.gaussian();
  return TimeSeries(std::move(values), dim);
}

TimeSeries fbm(std::size_t length, std::size_t dim, double hurst, std::uint64_t seed) {
  if (length < 2) throw std::invalid_argument("fbm: length must be >= 2");
  if (length > 4096) throw std::invalid_argument("fbm: length above the 4096 Cholesky budget");
  if (dim < 1) throw std::invalid_argument("fbm: dimension must be >= 1");
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("fbm: Hurst index must lie in (0,1)");

  const std::size_t n = length - 1;  // grid points t_1..t_{l-1}; t_0 = 0 is exact
  std::vector<double> cov(n * n);
  const double h2 = 2.0 * hurst;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i + 1) / static_cast<double>(length - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double tj = static_cast<double>(j + 1) / static_cast<double>(length - 1);
      cov[i * n + j] =
          0.5 * (std::pow(ti, h2) + std::pow(tj, h2) - std::pow(std::abs(ti - tj), h2));
    }
  }
  if (!cholesky(cov, n))
    throw NumericError(
        "fbm: covariance factorization failed; the Hurst index is too extreme for this grid, "
        "try adding diagonal jitter");

  Rng rng(seed);
  std::vector<double> values(length * dim, 0.0);
  std::vector<double> z(n);
  for (std::size_t c = 0; c < dim; ++c) {
    for (auto& v : z) v = rng.gaussian();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= i; ++k) acc += cov[i * n + k] * z[k];
      values[(i + 1) * dim + c] = acc;
    }
  }
  return TimeSeries(std::move(values), dim);
}

TimeSeries near_periodic(std::size_t length, std::size_t dim, double period,
                         double amplitude, double noise, std::uint64_t seed) {
  if (length < 2) throw std::invalid_argument("near_periodic: length must be >= 2");
  if (dim < 1) throw std::invalid_argument("near_periodic: dimension must be >= 1");
  if (!(period > 0.0)) throw std::invalid_argument("near_periodic: period must be positive");

  Rng rng(seed);
  std::vector<double> phase(dim);
  for (auto& p : phase) p = 2.0 * M_PI * rng.uniform01();

  const double two_pi = 2.0 * M_PI;
  std::vector<double> values(length * dim);
  for (std::size_t k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(length - 1);
    for (std::size_t c = 0; c < dim; ++c) {
      double v = amplitude * std::sin(two_pi * t / period + phase[c]);
      if (noise != 0.0) v += noise * rng.gaussian();
      values[k * dim + c] = v;
    }
  }
  return TimeSeries(std::move(values), dim);
}

}  // namespace sigker::datagen
