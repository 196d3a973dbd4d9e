#include "sigker/gram.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "sigker/errors.hpp"
#include "sigker/thread_pool.hpp"
#include "sigker/wavefront.hpp"

namespace sigker {

GramResult gram_matrix(const std::vector<TimeSeries>& family, const GramOptions& options) {
  if (family.empty()) throw std::invalid_argument("gram_matrix: family must be nonempty");
  const std::size_t dim = family.front().dim();
  std::size_t max_len = 0;
  for (const auto& ts : family) {
    if (ts.dim() != dim) throw std::invalid_argument("gram_matrix: mixed dimensions in family");
    max_len = std::max(max_len, ts.length());
  }
  max_len = std::max<std::size_t>(max_len, 2);
  std::vector<TimeSeries> padded;
  padded.reserve(family.size());
  for (const auto& ts : family) padded.push_back(pad_to_length(ts, max_len));

  const std::size_t m = padded.size();
  const bool adaptive = options.policy.mode == TruncationPolicy::Mode::kAdaptive;
  const bool scan_products = adaptive || options.compute_bound;

  GramResult result;
  result.size = m;
  result.adaptive = adaptive;
  result.values.assign(m * m, std::numeric_limits<double>::quiet_NaN());
  result.orders.assign(m * m, 0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(m * (m + 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) pairs.emplace_back(i, j);

  std::mutex failures_mutex;
  std::atomic<std::size_t> peak{0};
  std::atomic<bool> all_converged{true};
  std::vector<double> pair_max(pairs.size(), 0.0);

  const auto t0 = std::chrono::steady_clock::now();
  ThreadPool pool(std::max(1u, options.threads));
  pool.parallel_for(pairs.size(), [&](unsigned, std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const auto [i, j] = pairs[p];
      int order = options.policy.order;
      bool converged = true;
      try {
        if (scan_products) {
          const IncrementTable table(padded[i], padded[j]);
          pair_max[p] = table.max_abs_rho();
          if (adaptive) {
            const auto est = estimate_order(pair_max[p], max_len, options.policy.tol);
            order = est.order;
            converged = est.converged;
          }
        }
        const KernelResult r = propagate(padded[i], padded[j], order);
        result.values[i * m + j] = r.value;
        result.values[j * m + i] = r.value;
        std::size_t prev = peak.load(std::memory_order_relaxed);
        while (r.peak_live_series > prev &&
               !peak.compare_exchange_weak(prev, r.peak_live_series, std::memory_order_relaxed)) {
        }
        if (!converged) all_converged.store(false, std::memory_order_relaxed);
      } catch (const NumericOverflowError& e) {
        std::lock_guard lock(failures_mutex);
        result.failures.push_back({i, j, e.what()});
      }
      result.orders[i * m + j] = order;
      result.orders[j * m + i] = order;
    }
  });
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  result.peak_live_series = peak.load();
  result.orders_converged = all_converged.load();
  result.min_order = *std::min_element(result.orders.begin(), result.orders.end());
  result.max_order = *std::max_element(result.orders.begin(), result.orders.end());
  if (scan_products)
    result.max_abs_increment_product = *std::max_element(pair_max.begin(), pair_max.end());
  if (options.compute_bound) {
    // The stated bound assumes one uniform truncation order; under the
    // adaptive policy the smallest per-entry order is the conservative pick.
    result.bound = gram_error_bound({m, max_len, result.max_abs_increment_product,
                                     result.min_order});
  }
  return result;
}

MapeResult mape(std::span<const double> values, std::span<const double> reference) {
  if (values.size() != reference.size() || values.empty())
    throw std::invalid_argument("mape: shapes differ or empty input");
  MapeResult out;
  double sum = 0.0;
  std::size_t included = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (reference[k] == 0.0) {
      ++out.excluded;
      continue;
    }
    sum += std::abs(values[k] - reference[k]) / std::abs(reference[k]);
    ++included;
  }
  if (included == 0) throw std::invalid_argument("mape: every reference entry is zero");
  out.value = sum / static_cast<double>(included);
  return out;
}

}  // namespace sigker
