#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sigker/time_series.hpp"
#include "sigker/truncation.hpp"

namespace sigker {

struct GramOptions {
  TruncationPolicy policy{};
  unsigned threads = 1;
  bool compute_bound = false;  // also forces the family-wide increment scan
};

struct GramEntryError {
  std::size_t row = 0;
  std::size_t col = 0;
  std::string message;
};

struct GramResult {
  std::size_t size = 0;
  std::vector<double> values;  // m x m row-major; NaN where an entry failed
  std::vector<int> orders;     // per-entry truncation order, mirrored
  int min_order = 0;
  int max_order = 0;
  bool adaptive = false;
  bool orders_converged = true;
  double max_abs_increment_product = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  std::size_t peak_live_series = 0;
  std::vector<GramEntryError> failures;  // overflow entries, surfaced not swallowed
};

// Pairwise kernel values K(1,1) over the family. Only the upper triangle is
// computed and mirrored. Series are padded to the common maximum length;
// mixed dimensions raise std::invalid_argument. Entries are independent work
// units processed by `threads` workers into preallocated slots, so results
// do not depend on the thread count.
GramResult gram_matrix(const std::vector<TimeSeries>& family, const GramOptions& options = {});

struct MapeResult {
  double value = 0.0;       // mean |G - Gref| / |Gref| over included entries
  std::size_t excluded = 0;  // reference entries equal to zero
};

// Throws std::invalid_argument on shape mismatch or when every reference
// entry is zero.
MapeResult mape(std::span<const double> values, std::span<const double> reference);

}  // namespace sigker
