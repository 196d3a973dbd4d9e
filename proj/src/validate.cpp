#include "sigker/validate.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sigker/datagen.hpp"
#include "sigker/oracles.hpp"
#include "sigker/tile_series.hpp"
#include "sigker/time_series.hpp"
#include "sigker/truncation.hpp"
#include "sigker/wavefront.hpp"

namespace sigker::validate {
namespace {

struct FaultGuard {
  explicit FaultGuard(bool enable) : enabled(enable) {
    if (enabled) tile::detail::set_w_fault_for_testing(true);
  }
  ~FaultGuard() {
    if (enabled) tile::detail::set_w_fault_for_testing(false);
  }
  bool enabled;
};

TimeSeries series_1d(std::initializer_list<double> pts) {
  return TimeSeries(std::vector<double>(pts), 1);
}

void record(SuiteReport& report, double error, double tol, const std::string& what) {
  ++report.cases;
  report.max_error = std::max(report.max_error, error);
  if (!(error <= tol)) {
    ++report.failures;
    char buf[64];
    std::snprintf(buf, sizeof buf, " (error %.3e > tol %.3e)", error, tol);
    report.messages.push_back(what + buf);
  }
}

TimeSeries random_series(datagen::Rng& rng, std::size_t len, std::size_t dim,
                         double max_increment_norm) {
  std::vector<double> values(len * dim, 0.0);
  for (std::size_t k = 1; k < len; ++k) {
    // random direction scaled to a random norm below the cap
    std::vector<double> step(dim);
    double norm2 = 0.0;
    for (auto& s : step) {
      s = rng.gaussian();
      norm2 += s * s;
    }
    const double target = max_increment_norm * rng.uniform01();
    const double scale = norm2 > 0 ? target / std::sqrt(norm2) : 0.0;
    for (std::size_t c = 0; c < dim; ++c)
      values[k * dim + c] = values[(k - 1) * dim + c] + scale * step[c];
  }
  return TimeSeries(std::move(values), dim);
}

SuiteReport closed_form(const SuiteOptions& options) {
  SuiteReport report;
  report.name = "closed-form";
  const double tol_bessel = options.tolerance > 0 ? options.tolerance : 1e-12;
  const double tol_two_tile = options.tolerance > 0 ? options.tolerance : 1e-10;

  for (double rho : {-4.0, -1.0, -0.1, 0.0, 0.1, 1.0, 4.0}) {
    const auto x = series_1d({0.0, 1.0});
    const auto y = series_1d({0.0, rho});
    const double got = propagate(x, y, 24).value;
    const double want = oracle::bessel_series_kernel(rho, 24);
    record(report, std::abs(got - want), tol_bessel,
           "single-tile closed form at rho=" + std::to_string(rho));
  }

  datagen::Rng rng(options.seed);
  const std::size_t cases = options.cases > 0 ? options.cases : 20;
  for (std::size_t c = 0; c < cases; ++c) {
    const double a = 2.0 * rng.uniform01() - 1.0;
    const double b1 = 2.0 * rng.uniform01() - 1.0;
    const double b2 = 2.0 * rng.uniform01() - 1.0;
    const auto x = pad_to_length(series_1d({0.0, a}), 3);
    const auto y = series_1d({0.0, b1, b1 + b2});
    const double got = propagate(x, y, 24).value;
    const double closed = oracle::two_tile_closed_form(a * b1, a * b2, 24);
    const double resummed = oracle::bessel_series_kernel(a * (b1 + b2), 24);
    record(report, std::abs(got - closed), tol_two_tile, "two-tile closed form");
    record(report, std::abs(got - resummed), tol_two_tile, "two-tile re-summation");
  }
  return report;
}

SuiteReport oracle_triangle(const SuiteOptions& options) {
  SuiteReport report;
  report.name = "oracle-triangle";
  const double tol_sig = options.tolerance > 0 ? options.tolerance : 1e-8;
  const double tol_fd = options.tolerance > 0 ? options.tolerance : 1e-4;
  datagen::Rng rng(options.seed);
  const std::size_t cases = options.cases > 0 ? options.cases : 20;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t len = 2 + static_cast<std::size_t>(rng.uniform01() * 9);  // <= 10
    const auto x = random_series(rng, len, 2, 0.8);
    const auto y = random_series(rng, len, 2, 0.8);
    const double fast = propagate(x, y, 24).value;
    const double sig = oracle::truncated_signature_kernel(x, y, 20);
    const double fd = oracle::goursat_fd_solve(x, y, 64);
    record(report, std::abs(fast - sig) / std::abs(sig), tol_sig, "propagate vs signature");
    record(report, std::abs(fd - fast) / std::abs(fast), tol_fd, "fd vs propagate");
    record(report, std::abs(fd - sig) / std::abs(sig), tol_fd, "fd vs signature");
  }
  return report;
}

SuiteReport bound_suite(const SuiteOptions& options) {
  SuiteReport report;
  report.name = "bound";
  datagen::Rng rng(options.seed);
  const std::size_t cases = options.cases > 0 ? options.cases : 50;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t len = 2 + static_cast<std::size_t>(rng.uniform01() * 7);  // <= 8
    const std::size_t dim = 1 + static_cast<std::size_t>(rng.uniform01() * 3);  // <= 3
    const auto x = random_series(rng, len, dim, 0.9);
    const auto y = random_series(rng, len, dim, 0.9);
    const IncrementTable table(x, y);
    const double max_x = table.max_abs_rho();
    const double reference = propagate(x, y, 64).value;
    for (int order : {8, 12, 16}) {
      const double got = propagate(x, y, order).value;
      const double bound = gram_error_bound({1, len, max_x, order});
      // pass iff |K_N - K_64| <= bound; report the excess as the error
      const double excess = std::abs(got - reference) - bound;
      record(report, std::max(0.0, excess), 0.0,
             "Frobenius bound violated at N=" + std::to_string(order));
    }
  }
  return report;
}

SuiteReport invariance(const SuiteOptions& options) {
  SuiteReport report;
  report.name = "invariance";
  datagen::Rng rng(options.seed);
  const std::size_t cases = options.cases > 0 ? options.cases : 20;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t len = 3 + static_cast<std::size_t>(rng.uniform01() * 8);
    const auto x = random_series(rng, len, 2, 1.0);
    const auto y = random_series(rng, len, 2, 1.0);

    const double xy = propagate(x, y, 24).value;
    const double yx = propagate(y, x, 24).value;
    record(report, std::abs(xy - yx), 1e-12 * std::max(1.0, std::abs(xy)), "symmetry");

    const double self = propagate(x, x, 24).value;
    record(report, std::max(0.0, 1.0 - self), 1e-10, "self-kernel positivity");

    // split one x segment at an interior point; K(1,1) must not move
    const std::size_t seg = static_cast<std::size_t>(rng.uniform01() * (len - 1));
    const double frac = 0.2 + 0.6 * rng.uniform01();
    std::vector<double> refined;
    const auto vals = x.values();
    for (std::size_t k = 0; k < len; ++k) {
      refined.insert(refined.end(), vals.begin() + k * 2, vals.begin() + (k + 1) * 2);
      if (k == seg) {
        for (std::size_t cc = 0; cc < 2; ++cc)
          refined.push_back(vals[k * 2 + cc] +
                            frac * (vals[(k + 1) * 2 + cc] - vals[k * 2 + cc]));
      }
    }
    const TimeSeries xr(std::move(refined), 2);
    const double refined_value =
        propagate(xr, pad_to_length(y, xr.length()), 24).value;
    record(report, std::abs(refined_value - xy), 1e-10 * std::max(1.0, std::abs(xy)),
           "collinear refinement invariance");
  }
  return report;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"closed-form", "oracle-triangle", "bound", "invariance"};
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  FaultGuard guard(options.inject_fault);
  if (name == "closed-form") return closed_form(options);
  if (name == "oracle-triangle") return oracle_triangle(options);
  if (name == "bound") return bound_suite(options);
  if (name == "invariance") return invariance(options);
  throw std::invalid_argument("unknown validation suite: " + name);
}

}  // namespace sigker::validate
