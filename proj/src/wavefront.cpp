#include "sigker/wavefront.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sigker/errors.hpp"
#include "sigker/thread_pool.hpp"

namespace sigker {
namespace {

// exp(2 sqrt(delta)) must stay below DBL_MAX for the single-tile series to
// be representable; beyond this even one tile overflows.
constexpr double kDeltaOverflowLimit = 1.25e5;

struct LiveCounter {
  std::atomic<long> current{0};
  std::atomic<long> peak{0};

  void add(long n) {
    const long now = current.fetch_add(n, std::memory_order_relaxed) + n;
    long prev = peak.load(std::memory_order_relaxed);
    while (now > prev && !peak.compare_exchange_weak(prev, now, std::memory_order_relaxed)) {
    }
  }
  void sub(long n) { current.fetch_sub(n, std::memory_order_relaxed); }
};

// C = A(delta) o B(alpha,beta) o W fused with the row/column reductions.
// Float expression and summation order match tile_coeffs + top_boundary +
// right_boundary exactly.
double fused_tile_step(double delta, std::span<const double> alpha, std::span<const double> beta,
                       std::span<const double> w, int order, std::span<double> out_alpha,
                       std::span<double> out_beta) {
  tile::detail::check_corner(alpha[0], beta[0]);
  const int n = order + 1;
  double pw[tile::kMaxOrder + 1];
  pw[0] = 1.0;
  for (int m = 1; m < n; ++m) pw[m] = pw[m - 1] * delta;

  for (int j = 0; j < n; ++j) out_beta[j] = 0.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* wrow = w.data() + static_cast<std::size_t>(i) * n;
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double b = (i >= j) ? alpha[i - j] : beta[j - i];
      const double val = b * (pw[std::min(i, j)] * wrow[j]);
      row_sum += val;
      out_beta[j] += val;
    }
    out_alpha[i] = row_sum;
    total += row_sum;
  }
  return total;
}

struct SeriesStrip {
  std::vector<std::vector<double>> slots;

  void init(std::size_t count, std::size_t coeffs) {
    slots.resize(count);
    for (auto& s : slots) s.assign(coeffs, 0.0);
  }
};

KernelResult run(const TimeSeries& x, const TimeSeries& y, int order,
                 const PropagateOptions& options, bool with_grid) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("propagate: series dimensions differ");
  if (x.length() < 2 || y.length() < 2)
    throw std::invalid_argument("propagate: both series need length >= 2");
  if (order < 1 || order > tile::kMaxOrder)
    throw std::invalid_argument("propagate: order must lie in [1, 64]");

  const std::size_t cols = x.length() - 1;  // tiles along the first series
  const std::size_t rows = y.length() - 1;  // tiles along the second series
  const std::size_t dim = x.dim();
  const std::vector<double> x_inc = increments(x);
  const std::vector<double> y_inc = increments(y);

  const std::size_t n = static_cast<std::size_t>(order) + 1;
  std::vector<double> w(n * n);
  tile::detail::build_W_into(w, order);

  KernelResult result;
  result.order = order;
  result.tiles_processed = rows * cols;
  if (with_grid) {
    result.grid_rows = x.length();
    result.grid_cols = y.length();
    result.grid.assign(x.length() * y.length(), 0.0);
    for (std::size_t a = 0; a < x.length(); ++a) result.grid[a * y.length()] = 1.0;
    for (std::size_t b = 0; b < y.length(); ++b) result.grid[b] = 1.0;
  }

  const std::size_t max_live = std::min(rows, cols);
  SeriesStrip s_cur, t_cur, s_nxt, t_nxt;
  s_cur.init(max_live, n);
  t_cur.init(max_live, n);
  s_nxt.init(max_live, n);
  t_nxt.init(max_live, n);

  LiveCounter live;
  const auto start_of = [&](std::size_t d) -> std::size_t {
    return d >= cols ? d - (cols - 1) : 0;
  };
  const auto prefill_units = [&](std::size_t d, SeriesStrip& s, SeriesStrip& t) {
    const std::size_t start = start_of(d);
    if (d <= cols - 1) {  // tile (0, d): bottom edge on the domain boundary
      auto& slot = s.slots[0];
      std::fill(slot.begin(), slot.end(), 0.0);
      slot[0] = 1.0;
      live.add(1);
    }
    if (d <= rows - 1) {  // tile (d, 0): left edge on the domain boundary
      auto& slot = t.slots[d - start];
      std::fill(slot.begin(), slot.end(), 0.0);
      slot[0] = 1.0;
      live.add(1);
    }
  };

  const unsigned workers = std::max(1u, options.threads);
  ThreadPool pool(workers);
  std::atomic<double> final_value{1.0};

  prefill_units(0, s_cur, t_cur);
  const std::size_t diagonals = rows + cols - 1;
  for (std::size_t d = 0; d < diagonals; ++d) {
    const std::size_t start = start_of(d);
    const std::size_t end = std::min(d, rows - 1);
    const std::size_t count = end - start + 1;
    const std::size_t start_next = start_of(d + 1);
    if (d + 1 < diagonals) prefill_units(d + 1, s_nxt, t_nxt);

    pool.parallel_for(count, [&](unsigned, std::size_t lo, std::size_t hi) {
      for (std::size_t idx = lo; idx < hi; ++idx) {
        const std::size_t k = options.reverse_diagonals ? count - 1 - idx : idx;
        const std::size_t i = start + k;  // tile row (second series)
        const std::size_t j = d - i;      // tile column (first series)

        const double* xi = x_inc.data() + j * dim;
        const double* yi = y_inc.data() + i * dim;
        double delta = 0.0;
        for (std::size_t c = 0; c < dim; ++c) delta += xi[c] * yi[c];
        if (!(std::abs(delta) <= kDeltaOverflowLimit))
          throw NumericOverflowError(
              "increment product " + std::to_string(delta) + " on tile (" +
                  std::to_string(j + 1) + ", " + std::to_string(i + 1) +
                  ") exceeds double range at any order; rescale the inputs",
              j + 1, i + 1);

        auto& alpha = s_cur.slots[k];
        auto& beta = t_cur.slots[k];
        const bool up = i + 1 < rows;
        const bool right = j + 1 < cols;
        std::vector<double> sink_a, sink_b;
        std::vector<double>& out_alpha = up ? s_nxt.slots[i + 1 - start_next] : sink_a;
        std::vector<double>& out_beta = right ? t_nxt.slots[i - start_next] : sink_b;
        if (!up) sink_a.assign(n, 0.0);
        if (!right) sink_b.assign(n, 0.0);

        const double tile_sum =
            fused_tile_step(delta, alpha, beta, w, order, out_alpha, out_beta);
        if (!std::isfinite(tile_sum))
          throw NumericOverflowError("non-finite series on tile (" + std::to_string(j + 1) +
                                         ", " + std::to_string(i + 1) +
                                         "); rescale the inputs or reduce the order",
                                     j + 1, i + 1);

        live.sub(2);
        live.add((up ? 1 : 0) + (right ? 1 : 0));

        if (with_grid)
          result.grid[(j + 1) * y.length() + (i + 1)] = tile_sum;
        if (i + 1 == rows && j + 1 == cols)
          final_value.store(tile_sum, std::memory_order_relaxed);
      }
    });

    std::swap(s_cur.slots, s_nxt.slots);
    std::swap(t_cur.slots, t_nxt.slots);
  }

  result.value = final_value.load();
  result.peak_live_series = static_cast<std::size_t>(live.peak.load());
  return result;
}

}  // namespace

KernelResult propagate(const TimeSeries& x, const TimeSeries& y, int order,
                       const PropagateOptions& options) {
  return run(x, y, order, options, /*with_grid=*/false);
}

KernelResult propagate_grid(const TimeSeries& x, const TimeSeries& y, int order,
                            const PropagateOptions& options) {
  return run(x, y, order, options, /*with_grid=*/true);
}

KernelResult propagate_with_policy(const TimeSeries& x, const TimeSeries& y,
                                   const TruncationPolicy& policy,
                                   const PropagateOptions& options) {
  int order = policy.order;
  bool converged = true;
  if (policy.mode == TruncationPolicy::Mode::kAdaptive) {
    const IncrementTable table(x, y);
    const auto est = estimate_order(table.max_abs_rho(), std::max(x.length(), y.length()),
                                    policy.tol);
    order = est.order;
    converged = est.converged;
  }
  KernelResult result = propagate(x, y, order, options);
  result.order_converged = converged;
  return result;
}

std::pair<tile::BoundarySeries, tile::BoundarySeries> step_tile(
    double delta, const tile::BoundarySeries& alpha, const tile::BoundarySeries& beta,
    int order) {
  if (order < 0 || order > tile::kMaxOrder)
    throw std::invalid_argument("step_tile: order must lie in [0, 64]");
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  if (alpha.a.size() < n || beta.a.size() < n)
    throw std::invalid_argument("step_tile: boundary series shorter than the order");
  std::vector<double> w(n * n);
  tile::detail::build_W_into(w, order);
  tile::BoundarySeries out_alpha{tile::BoundaryAxis::AlongU, std::vector<double>(n)};
  tile::BoundarySeries out_beta{tile::BoundaryAxis::AlongV, std::vector<double>(n)};
  fused_tile_step(delta, alpha.a, beta.a, w, order, out_alpha.a, out_beta.a);
  return {std::move(out_alpha), std::move(out_beta)};
}

}  // namespace sigker
