#pragma once

#include <cstddef>

namespace sigker {

/// How the truncation order of a kernel evaluation is chosen. Fixed mode
/// defaults to order 7 (benchmark parity); the adaptive search sweeps
/// N = 8..64 against a tail tolerance.
struct TruncationPolicy {
  enum class Mode { kFixed, kAdaptive };

  Mode mode = Mode::kFixed;
  int order = 7;
  double tol = 1e-12;

  static TruncationPolicy fixed(int order);
  static TruncationPolicy adaptive(double tol = 1e-12);
};

struct OrderEstimate {
  int order = 0;
  bool converged = true;  // false: no order in [8,64] met the tolerance
};

// Modified Bessel function of the first kind, order zero, by its power
// series: sum_k (x/2)^{2k} / (k!)^2, summed until the next term drops below
// machine epsilon relative to the partial sum. Throws std::invalid_argument
// for x < 0.
double bessel_i0(double x);

// Smallest N in [8,64] whose worst-tile tail estimate falls below tol. The
// estimate builds the unit-boundary tile matrix at max_abs_rho and sums its
// last row and last column (tile-local coordinates, so the edge lengths are
// 1 and no grid power enters). Returns {64, false} when nothing qualifies.
OrderEstimate estimate_order(double max_abs_rho, std::size_t length, double tol);

struct ErrorBoundInputs {
  std::size_t family_size = 1;           // m
  std::size_t length = 2;                // ell (common padded length)
  double max_abs_increment_product = 0;  // max |<dx_k, dy_l>| over the family
  int order = 7;                         // N
};

// A-priori Frobenius bound on |G - G_N| for the order-N Gram matrix:
//   gamma * X^{N+1} * zeta_N / ((N+1)!)^2
// with gamma = (m/2) * prod_{nu=0}^{2l-2} I0(2 sqrt(nu X)/(l-1)) and
// zeta_N = [1 + (2l-2)/(N+2)] * (2/(l-1))^{N+1}, where X is the input bound
// lifted to the PDE-coefficient scale, X = (l-1)^2 * max_abs_increment_product
// (on the bare products the envelope fails already on one tile).
double gram_error_bound(const ErrorBoundInputs& inputs);

}  // namespace sigker
