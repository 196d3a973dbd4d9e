#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sigker/datagen.hpp"
#include "sigker/time_series.hpp"

namespace testutil {

inline sigker::TimeSeries series_1d(std::initializer_list<double> pts) {
  return sigker::TimeSeries(std::vector<double>(pts), 1);
}

// Random piecewise-linear path with increment norms below the cap.
inline sigker::TimeSeries random_series(sigker::datagen::Rng& rng, std::size_t len,
                                        std::size_t dim, double max_increment_norm) {
  std::vector<double> values(len * dim, 0.0);
  for (std::size_t k = 1; k < len; ++k) {
    std::vector<double> step(dim);
    double norm2 = 0.0;
    for (auto& s : step) {
      s = rng.gaussian();
      norm2 += s * s;
    }
    const double target = max_increment_norm * rng.uniform01();
    const double scale = norm2 > 0.0 ? target / std::sqrt(norm2) : 0.0;
    for (std::size_t c = 0; c < dim; ++c)
      values[k * dim + c] = values[(k - 1) * dim + c] + scale * step[c];
  }
  return sigker::TimeSeries(std::move(values), dim);
}

// Test-local factorials, independent of the library tables.
inline double fact(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Test-local partial sum of the single-tile diagonal series.
inline double diagonal_series(double rho, int order) {
  double sum = 0.0;
  for (int i = 0; i <= order; ++i) sum += std::pow(rho, i) / (fact(i) * fact(i));
  return sum;
}

// Jacobi eigenvalues of a symmetric matrix (test-scale only).
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-28) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = 0.5 * (a[q * n + q] - a[p * n + p]) / apq;
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
  return eig;
}

}  // namespace testutil
