#pragma once

#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

namespace sigker {

/// A length-ell sequence of d-dimensional sample points on the uniform grid
/// over [0,1]. Values are stored row-major (one point per row). Immutable
/// after construction; safe to share across threads.
class TimeSeries {
 public:
  // Throws std::invalid_argument on empty data, dim == 0, size not a
  // multiple of dim, or non-finite coordinates.
  TimeSeries(std::vector<double> values, std::size_t dim);

  std::size_t length() const noexcept { return length_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t k) const {
    return {values_.data() + k * dim_, dim_};
  }
  std::span<const double> values() const noexcept { return values_; }

  // Knot position of sample k: (k)/(length-1) on [0,1]. Requires length >= 2.
  double knot(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(length_ - 1); }

  friend bool operator==(const TimeSeries& a, const TimeSeries& b) {
    return a.dim_ == b.dim_ && a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  std::size_t length_;
  std::size_t dim_;
};

// Repeats the final point until the series has length target_length.
// Throws std::invalid_argument if target_length < ts.length().
TimeSeries pad_to_length(const TimeSeries& ts, std::size_t target_length);

// Forward differences: entry k is point(k+1) - point(k), flattened row-major
// into (length-1) x dim. Throws std::invalid_argument if length < 2.
std::vector<double> increments(const TimeSeries& ts);

/// Increment products for one pair of series: rho(k, l) is the Euclidean
/// inner product of the k-th increment of x with the l-th increment of y
/// (bare product; tile-local unit coordinates carry no grid scaling).
/// Products are computed on demand -- the full (ell-1)^2 table is never
/// materialized on the production path; materialize_table() exists for
/// diagnostics and tests only.
class IncrementTable {
 public:
  // Requires both series of length >= 2 and equal dimension.
  IncrementTable(const TimeSeries& x, const TimeSeries& y);

  std::size_t x_count() const noexcept { return x_count_; }
  std::size_t y_count() const noexcept { return y_count_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> x_increment(std::size_t k) const {
    return {x_incs_.data() + k * dim_, dim_};
  }
  std::span<const double> y_increment(std::size_t l) const {
    return {y_incs_.data() + l * dim_, dim_};
  }

  // 0 <= k < x_count(), 0 <= l < y_count(); throws std::invalid_argument
  // when out of range.
  double rho(std::size_t k, std::size_t l) const;

  // Largest |rho(k, l)| over all tiles. Scanned once on first use and cached.
  double max_abs_rho() const;

  // Diagnostics only: the full x_count() x y_count() table, row-major in k.
  std::vector<double> materialize_table() const;

 private:
  std::vector<double> x_incs_;
  std::vector<double> y_incs_;
  std::size_t x_count_;
  std::size_t y_count_;
  std::size_t dim_;
  mutable std::once_flag max_scan_;
  mutable double max_abs_rho_ = 0.0;
};

}  // namespace sigker
