#include "sigker/time_series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigker {

TimeSeries::TimeSeries(std::vector<double> values, std::size_t dim)
    : values_(std::move(values)), dim_(dim) {
  if (dim_ == 0) throw std::invalid_argument("time series dimension must be >= 1");
  if (values_.empty()) throw std::invalid_argument("time series must contain at least one point");
  if (values_.size() % dim_ != 0)
    throw std::invalid_argument("value count is not a multiple of the dimension");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("time series coordinates must be finite");
  }
  length_ = values_.size() / dim_;
}

TimeSeries pad_to_length(const TimeSeries& ts, std::size_t target_length) {
  if (target_length < ts.length())
    throw std::invalid_argument("pad_to_length: target shorter than the series");
  std::vector<double> out(ts.values().begin(), ts.values().end());
  out.reserve(target_length * ts.dim());
  const auto last = ts.point(ts.length() - 1);
  for (std::size_t k = ts.length(); k < target_length; ++k)
    out.insert(out.end(), last.begin(), last.end());
  return TimeSeries(std::move(out), ts.dim());
}

std::vector<double> increments(const TimeSeries& ts) {
  if (ts.length() < 2)
    throw std::invalid_argument("increments: a single point has no increments");
  const std::size_t d = ts.dim();
  std::vector<double> out((ts.length() - 1) * d);
  const auto vals = ts.values();
  for (std::size_t k = 0; k + 1 < ts.length(); ++k)
    for (std::size_t i = 0; i < d; ++i)
      out[k * d + i] = vals[(k + 1) * d + i] - vals[k * d + i];
  return out;
}

IncrementTable::IncrementTable(const TimeSeries& x, const TimeSeries& y)
    : x_incs_(increments(x)),
      y_incs_(increments(y)),
      x_count_(x.length() - 1),
      y_count_(y.length() - 1),
      dim_(x.dim()) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("increment table: series dimensions differ");
}

double IncrementTable::rho(std::size_t k, std::size_t l) const {
  if (k >= x_count_ || l >= y_count_)
    throw std::invalid_argument("rho: tile index out of range");
  const double* a = x_incs_.data() + k * dim_;
  const double* b = y_incs_.data() + l * dim_;
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) acc += a[i] * b[i];
  return acc;
}

double IncrementTable::max_abs_rho() const {
  std::call_once(max_scan_, [this] {
    double best = 0.0;
    for (std::size_t k = 0; k < x_count_; ++k)
      for (std::size_t l = 0; l < y_count_; ++l)
        best = std::max(best, std::abs(rho(k, l)));
    max_abs_rho_ = best;
  });
  return max_abs_rho_;
}

std::vector<double> IncrementTable::materialize_table() const {
  std::vector<double> table(x_count_ * y_count_);
  for (std::size_t k = 0; k < x_count_; ++k)
    for (std::size_t l = 0; l < y_count_; ++l)
      table[k * y_count_ + l] = rho(k, l);
  return table;
}

}  // namespace sigker
