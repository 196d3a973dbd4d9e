#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sigker {

// Malformed input files. Locations are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t row, std::size_t column)
      : std::runtime_error(std::move(message)), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// The corner values of the two boundary series entering a tile disagree.
// Boundary data is produced by one upstream coefficient matrix, so any
// mismatch beyond float noise signals a propagation bug.
class InconsistentBoundaryError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite intermediate during propagation. Carries the 1-based tile
// indices (k along the first series, l along the second).
class NumericOverflowError : public std::runtime_error {
 public:
  NumericOverflowError(std::string message, std::size_t tile_k, std::size_t tile_l)
      : std::runtime_error(std::move(message)), tile_k_(tile_k), tile_l_(tile_l) {}

  std::size_t tile_k() const noexcept { return tile_k_; }
  std::size_t tile_l() const noexcept { return tile_l_; }

 private:
  std::size_t tile_k_;
  std::size_t tile_l_;
};

// A configured memory/work budget would be exceeded (oracles only).
class ResourceBudgetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failure outside propagation (e.g. a covariance factorization).
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sigker
