#include "sigker/tile_series.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sigker/errors.hpp"

namespace sigker::tile {
namespace detail {
namespace {

constexpr int kFactorialCount = 171;  // 170! is the last finite double factorial

std::atomic<bool> g_w_fault{false};

const double* factorial_table() {
  static const auto table = [] {
    static double t[kFactorialCount];
    t[0] = 1.0;
    for (int k = 1; k < kFactorialCount; ++k) t[k] = t[k - 1] * static_cast<double>(k);
    return t;
  }();
  return table;
}

void require_order(int order) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("truncation order must lie in [0, 64]");
}

}  // namespace

std::span<const double> factorials() { return {factorial_table(), kFactorialCount}; }

void set_w_fault_for_testing(bool enabled) { g_w_fault.store(enabled); }
bool w_fault_for_testing() { return g_w_fault.load(std::memory_order_relaxed); }

void build_W_into(std::span<double> w, int order) {
  const double* fact = factorial_table();
  const int n = order + 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = fact[j - i] / (fact[j] * fact[i]);
      w[static_cast<std::size_t>(i) * n + j] = v;
      w[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  if (g_w_fault.load(std::memory_order_relaxed) && order >= 1)
    w[static_cast<std::size_t>(1) * n + 1] = -w[static_cast<std::size_t>(1) * n + 1];
}

void build_A_into(std::span<double> a, double delta, int order) {
  const int n = order + 1;
  // delta^min(i,j) built from cumulative powers; 0^0 := 1 holds since pw
  // starts at 1 before any multiplication.
  double pw = 1.0;
  for (int m = 0; m < n; ++m) {
    a[static_cast<std::size_t>(m) * n + m] = pw;
    for (int j = m + 1; j < n; ++j) {
      a[static_cast<std::size_t>(m) * n + j] = pw;
      a[static_cast<std::size_t>(j) * n + m] = pw;
    }
    pw *= delta;
  }
}

void check_corner(double alpha0, double beta0) {
  const double scale = std::max({1.0, std::abs(alpha0), std::abs(beta0)});
  if (std::abs(alpha0 - beta0) > 1e-9 * scale)
    throw InconsistentBoundaryError("boundary series disagree at the shared corner: alpha[0]=" +
                                    std::to_string(alpha0) + " beta[0]=" + std::to_string(beta0));
}

}  // namespace detail

BoundarySeries BoundarySeries::unit(BoundaryAxis axis, int order) {
  BoundarySeries s;
  s.axis = axis;
  s.a.assign(static_cast<std::size_t>(order) + 1, 0.0);
  s.a[0] = 1.0;
  return s;
}

std::vector<double> power_vector(double x, int order) {
  detail::require_order(order);
  std::vector<double> v(static_cast<std::size_t>(order) + 1);
  v[0] = 1.0;
  for (int r = 1; r <= order; ++r) v[r] = v[r - 1] * x;
  return v;
}

CoeffMatrix build_W(int order) {
  detail::require_order(order);
  CoeffMatrix w{order, std::vector<double>(static_cast<std::size_t>(order + 1) * (order + 1))};
  detail::build_W_into(w.entries, order);
  return w;
}

CoeffMatrix build_A(double delta, int order) {
  detail::require_order(order);
  if (!std::isfinite(delta)) throw std::invalid_argument("build_A: delta must be finite");
  CoeffMatrix a{order, std::vector<double>(static_cast<std::size_t>(order + 1) * (order + 1))};
  detail::build_A_into(a.entries, delta, order);
  return a;
}

CoeffMatrix build_B(const BoundarySeries& alpha, const BoundarySeries& beta, int order) {
  detail::require_order(order);
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  if (alpha.a.size() < n || beta.a.size() < n)
    throw std::invalid_argument("build_B: boundary series shorter than the order");
  detail::check_corner(alpha.a[0], beta.a[0]);
  CoeffMatrix b{order, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b.entries[i * n + j] = (i >= j) ? alpha.a[i - j] : beta.a[j - i];
  return b;
}

CoeffMatrix tile_coeffs(double delta, const BoundarySeries& alpha,
                        const BoundarySeries& beta, int order) {
  CoeffMatrix c = build_B(alpha, beta, order);
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  std::vector<double> w(n * n), a(n * n);
  detail::build_W_into(w, order);
  detail::build_A_into(a, delta, order);
  for (std::size_t k = 0; k < n * n; ++k) c.entries[k] *= a[k] * w[k];
  return c;
}

double eval_series(const CoeffMatrix& c, double u, double v) {
  const int n = c.order + 1;
  double outer = 0.0;
  for (int i = c.order; i >= 0; --i) {
    const double* row = c.entries.data() + static_cast<std::size_t>(i) * n;
    double inner = 0.0;
    for (int j = c.order; j >= 0; --j) inner = inner * v + row[j];
    outer = outer * u + inner;
  }
  return outer;
}

BoundarySeries top_boundary(const CoeffMatrix& c) {
  const std::size_t n = static_cast<std::size_t>(c.order) + 1;
  BoundarySeries s;
  s.axis = BoundaryAxis::AlongU;
  s.a.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = c.entries.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += row[j];
    s.a[i] = acc;
  }
  return s;
}

BoundarySeries right_boundary(const CoeffMatrix& c) {
  const std::size_t n = static_cast<std::size_t>(c.order) + 1;
  BoundarySeries s;
  s.axis = BoundaryAxis::AlongV;
  s.a.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += c.entries[i * n + j];
    s.a[j] = acc;
  }
  return s;
}

CoeffMatrix neumann_coeffs_slow(double delta, const BoundarySeries& alpha,
                                const BoundarySeries& beta, int order, int iters) {
  detail::require_order(order);
  if (iters < 1) throw std::invalid_argument("neumann_coeffs_slow: iters must be >= 1");
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  if (alpha.a.size() < n || beta.a.size() < n)
    throw std::invalid_argument("neumann_coeffs_slow: boundary series shorter than the order");
  detail::check_corner(alpha.a[0], beta.a[0]);

  // C_0: alpha down the first column, beta across the first row, the shared
  // corner once at (0,0).
  CoeffMatrix current{order, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) current.at(static_cast<int>(i), 0) = alpha.a[i];
  for (std::size_t j = 1; j < n; ++j) current.at(0, static_cast<int>(j)) = beta.a[j];

  CoeffMatrix total = current;
  CoeffMatrix next{order, std::vector<double>(n * n, 0.0)};
  for (int it = 1; it <= iters; ++it) {
    // C_{n+1}[i][j] = delta * C_n[i-1][j-1] / (i j); the shift annihilates
    // row and column zero (the 0/0 := 0 convention).
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        next.entries[i * n + j] =
            (i == 0 || j == 0)
                ? 0.0
                : delta * current.entries[(i - 1) * n + (j - 1)] /
                      (static_cast<double>(i) * static_cast<double>(j));
      }
    }
    std::swap(current.entries, next.entries);
    for (std::size_t k = 0; k < n * n; ++k) total.entries[k] += current.entries[k];
  }
  return total;
}

void dump_csv(const CoeffMatrix& c, std::ostream& out) {
  char buf[40];
  const int n = c.order + 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", c.at(i, j));
      out << buf;
      if (j + 1 < n) out << ',';
    }
    out << '\n';
  }
}

double monomial_propagation(double delta, int power, int n) {
  if (power < 0 || n < 0) throw std::invalid_argument("monomial_propagation: negative arguments");
  const auto fact = detail::factorials();
  if (static_cast<std::size_t>(power) + static_cast<std::size_t>(n) >= fact.size())
    throw std::invalid_argument("monomial_propagation: power + n too large for double factorials");
  return std::pow(delta, n) * fact[power] / (fact[power + n] * fact[n]);
}

}  // namespace sigker::tile
