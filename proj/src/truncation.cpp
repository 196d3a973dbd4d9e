#include "sigker/truncation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sigker/tile_series.hpp"

namespace sigker {

TruncationPolicy TruncationPolicy::fixed(int order) {
  if (order < 1 || order > tile::kMaxOrder)
    throw std::invalid_argument("fixed truncation order must lie in [1, 64]");
  TruncationPolicy p;
  p.mode = Mode::kFixed;
  p.order = order;
  return p;
}

TruncationPolicy TruncationPolicy::adaptive(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive tolerance must be positive");
  TruncationPolicy p;
  p.mode = Mode::kAdaptive;
  p.tol = tol;
  return p;
}

double bessel_i0(double x) {
  if (x < 0.0) throw std::invalid_argument("bessel_i0: argument must be nonnegative");
  const double q = 0.25 * x * x;  // ((x/2)^2)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (term < sum * std::numeric_limits<double>::epsilon()) break;
  }
  return sum;
}

OrderEstimate estimate_order(double max_abs_rho, std::size_t /*length*/, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("estimate_order: tolerance must be positive");
  if (max_abs_rho < 0.0 || !std::isfinite(max_abs_rho))
    throw std::invalid_argument("estimate_order: max_abs_rho must be finite and nonnegative");
  for (int n = 8; n <= tile::kMaxOrder; ++n) {
    const auto unit_u = tile::BoundarySeries::unit(tile::BoundaryAxis::AlongU, n);
    const auto unit_v = tile::BoundarySeries::unit(tile::BoundaryAxis::AlongV, n);
    const auto c = tile::tile_coeffs(max_abs_rho, unit_u, unit_v, n);
    double tail = 0.0;
    for (int j = 0; j <= n; ++j) tail += c.at(n, j);
    for (int i = 0; i <= n; ++i) tail += c.at(i, n);
    if (tail < tol) return {n, true};
  }
  return {tile::kMaxOrder, false};
}

double gram_error_bound(const ErrorBoundInputs& inputs) {
  if (inputs.family_size < 1) throw std::invalid_argument("gram_error_bound: family size must be >= 1");
  if (inputs.length < 2) throw std::invalid_argument("gram_error_bound: length must be >= 2");
  if (inputs.max_abs_increment_product < 0.0)
    throw std::invalid_argument("gram_error_bound: increment product bound must be >= 0");
  if (inputs.order < 0) throw std::invalid_argument("gram_error_bound: order must be >= 0");

  const double lm1 = static_cast<double>(inputs.length - 1);
  const int n = inputs.order;
  // The inequality needs the norm at the PDE-coefficient scale, i.e. on the
  // derivative products (l-1)^2 * max|<dx, dy>|; with the bare products the
  // stated envelope is violated already on one tile.
  const double max_x = lm1 * lm1 * inputs.max_abs_increment_product;

  double gamma = 0.5 * static_cast<double>(inputs.family_size);
  const std::size_t terms = 2 * inputs.length - 2;  // nu = 0 .. 2l-2
  for (std::size_t nu = 0; nu <= terms; ++nu)
    gamma *= bessel_i0(2.0 * std::sqrt(static_cast<double>(nu) * max_x) / lm1);

  const double zeta =
      (1.0 + (2.0 * lm1) / (n + 2.0)) * std::pow(2.0 / lm1, n + 1);

  const auto fact = tile::detail::factorials();
  if (static_cast<std::size_t>(n) + 1 < fact.size()) {
    const double fac = fact[static_cast<std::size_t>(n) + 1];
    return gamma * std::pow(max_x, n + 1) * zeta / (fac * fac);
  }
  // Beyond the double-precision factorial table: evaluate in log space.
  const double log_tail = (n + 1) * std::log(max_x) - 2.0 * std::lgamma(n + 2.0);
  return gamma * zeta * std::exp(log_tail);
}

}  // namespace sigker
