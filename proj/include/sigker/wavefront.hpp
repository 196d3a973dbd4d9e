#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sigker/tile_series.hpp"
#include "sigker/time_series.hpp"
#include "sigker/truncation.hpp"

namespace sigker {

struct PropagateOptions {
  unsigned threads = 1;
  // Diagnostic: process each anti-diagonal's tiles in reverse slot order.
  // Tiles on one diagonal share no inputs, so outputs must be bit-identical.
  bool reverse_diagonals = false;
};

struct KernelResult {
  double value = 1.0;
  int order = 0;
  bool order_converged = true;  // false only when an adaptive search saturated
  std::size_t tiles_processed = 0;
  std::size_t peak_live_series = 0;

  // Knot-corner values K(sigma_a, tau_b); filled by propagate_grid only.
  // Row a follows the first series' knots, column b the second's.
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;
  std::vector<double> grid;
};

// Anti-diagonal sweep over all tiles. Keeps two diagonals of boundary series
// alive (O(ell * order) reals); the value is the order-N tile-centered
// approximation of K(1,1). Boundary series on the domain edges are the
// constant-one series. Throws std::invalid_argument on dimension mismatch or
// order outside [1,64]; NumericOverflowError (naming the tile) when a
// non-finite intermediate appears or an increment product is too extreme for
// double precision.
KernelResult propagate(const TimeSeries& x, const TimeSeries& y, int order,
                       const PropagateOptions& options = {});

// As propagate, additionally storing K at every knot pair. Memory O(ell^2);
// explicitly opt-in.
KernelResult propagate_grid(const TimeSeries& x, const TimeSeries& y, int order,
                            const PropagateOptions& options = {});

// Chooses the order per the policy (adaptive mode scans the pair's largest
// |rho| first), then propagates.
KernelResult propagate_with_policy(const TimeSeries& x, const TimeSeries& y,
                                   const TruncationPolicy& policy,
                                   const PropagateOptions& options = {});

// One tile step: tile coefficients from (delta, alpha, beta), reduced to the
// boundary series handed to the neighbors above and to the right.
// Bit-identical to top_boundary/right_boundary over tile_coeffs.
std::pair<tile::BoundarySeries, tile::BoundarySeries> step_tile(
    double delta, const tile::BoundarySeries& alpha, const tile::BoundarySeries& beta,
    int order);

}  // namespace sigker
