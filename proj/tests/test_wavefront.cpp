#include <doctest.h>

#include <cmath>
#include <cstring>

#include "helpers.hpp"
#include "sigker/errors.hpp"
#include "sigker/oracles.hpp"
#include "sigker/wavefront.hpp"

using namespace sigker;
using testutil::series_1d;

TEST_SUITE_BEGIN("wavefront");

TEST_CASE("constant series give the constant kernel") {
  for (std::size_t len : {2u, 3u, 9u}) {
    const auto x = pad_to_length(TimeSeries({0.4, -1.0}, 2), len);
    const auto result = propagate(x, x, 12);
    CHECK(result.value == 1.0);
    CHECK(result.tiles_processed == (len - 1) * (len - 1));
  }
}

TEST_CASE("single tile reproduces the diagonal series") {
  const auto x = series_1d({0.0, 1.0});
  for (double rho : {-4.0, -1.0, 0.5, 1.0, 4.0}) {
    const auto y = series_1d({0.0, rho});
    const double value = propagate(x, y, 24).value;
    CHECK(value == doctest::Approx(testutil::diagonal_series(rho, 24)).epsilon(1e-14));
  }
  CHECK(propagate(x, x, 24).value ==
        doctest::Approx(std::cyl_bessel_i(0.0, 2.0)).epsilon(1e-14));
}

TEST_CASE("collinear refinement leaves the kernel unchanged") {
  const auto coarse = series_1d({0.0, 1.0});
  const auto fine = series_1d({0.0, 0.5, 1.0});
  const double direct = propagate(coarse, coarse, 20).value;
  const double refined = propagate(fine, fine, 20).value;
  CHECK(refined == doctest::Approx(direct).epsilon(1e-12));
  CHECK(refined == doctest::Approx(std::cyl_bessel_i(0.0, 2.0)).epsilon(1e-12));

  datagen::Rng rng(900);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = testutil::random_series(rng, 6, 2, 1.4);
    const auto y = testutil::random_series(rng, 6, 2, 1.4);
    const double base = propagate(x, y, 20).value;

    const std::size_t seg = static_cast<std::size_t>(rng.uniform01() * 5);
    const double frac = 0.2 + 0.6 * rng.uniform01();
    std::vector<double> refined_pts;
    const auto vals = x.values();
    for (std::size_t k = 0; k < 6; ++k) {
      refined_pts.insert(refined_pts.end(), vals.begin() + k * 2, vals.begin() + (k + 1) * 2);
      if (k == seg)
        for (std::size_t c = 0; c < 2; ++c)
          refined_pts.push_back(vals[k * 2 + c] + frac * (vals[(k + 1) * 2 + c] - vals[k * 2 + c]));
    }
    const TimeSeries xr(std::move(refined_pts), 2);
    const double split = propagate(xr, pad_to_length(y, 7), 20).value;
    CHECK(std::abs(split - base) < 1e-10 * std::max(1.0, std::abs(base)));
  }
}

TEST_CASE("step_tile composes the tile primitives bit-exactly") {
  datagen::Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int order = 2 + static_cast<int>(rng.uniform01() * 14);
    tile::BoundarySeries alpha{tile::BoundaryAxis::AlongU, std::vector<double>(order + 1)};
    tile::BoundarySeries beta{tile::BoundaryAxis::AlongV, std::vector<double>(order + 1)};
    alpha.a[0] = beta.a[0] = 2.0 * rng.uniform01() - 1.0;
    for (int r = 1; r <= order; ++r) {
      alpha.a[r] = (2.0 * rng.uniform01() - 1.0) / (r * r + 1.0);
      beta.a[r] = (2.0 * rng.uniform01() - 1.0) / (r * r + 1.0);
    }
    const double delta = 6.0 * rng.uniform01() - 3.0;

    const auto [up, right] = step_tile(delta, alpha, beta, order);
    const auto c = tile::tile_coeffs(delta, alpha, beta, order);
    CHECK(up.a == tile::top_boundary(c).a);
    CHECK(right.a == tile::right_boundary(c).a);
  }
}

TEST_CASE("step_tile passthrough and diagonal examples") {
  const int order = 16;
  const auto unit_u = tile::BoundarySeries::unit(tile::BoundaryAxis::AlongU, order);
  const auto unit_v = tile::BoundarySeries::unit(tile::BoundaryAxis::AlongV, order);
  const auto [up, right] = step_tile(1.0, unit_u, unit_v, order);
  for (int i = 0; i <= order; ++i) {
    const double expect = 1.0 / (testutil::fact(i) * testutil::fact(i));
    CHECK(up.a[i] == doctest::Approx(expect).epsilon(1e-14));
    CHECK(right.a[i] == doctest::Approx(expect).epsilon(1e-14));
  }

  tile::BoundarySeries alpha{tile::BoundaryAxis::AlongU, {1.0, 0.5, -0.1}};
  tile::BoundarySeries beta{tile::BoundaryAxis::AlongV, {1.0, 0.25, 0.0}};
  const auto [pu, pr] = step_tile(0.0, alpha, beta, 2);
  CHECK(pu.a[0] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(pu.a[1] == 0.5);
  CHECK(pu.a[2] == -0.1);
  CHECK(pr.a[0] == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(pr.a[1] == 0.25);
}

TEST_CASE("kernel symmetry, self positivity, monotone order") {
  datagen::Rng rng(123);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t len = 3 + static_cast<std::size_t>(rng.uniform01() * 7);
    const auto x = testutil::random_series(rng, len, 2, 1.2);
    const auto y = testutil::random_series(rng, len, 2, 1.2);
    const double xy = propagate(x, y, 24).value;
    const double yx = propagate(y, x, 24).value;
    CHECK(std::abs(xy - yx) <= 1e-12 * std::max(1.0, std::abs(xy)));
    CHECK(propagate(x, x, 24).value >= 1.0 - 1e-10);
  }

  // all increment products nonnegative: value must climb with the order
  const TimeSeries mono({0.0, 0.0, 0.7, 0.4, 1.1, 0.9, 2.0, 1.5}, 2);
  double prev = 0.0;
  for (int n : {4, 6, 8, 10, 12, 16}) {
    const double v = propagate(mono, mono, n).value;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(std::abs(propagate(mono, mono, 16).value - prev) < 1e-12);
}

TEST_CASE("diagonal processing order does not change the bits") {
  datagen::Rng rng(88);
  const auto x = testutil::random_series(rng, 12, 2, 1.0);
  const auto y = testutil::random_series(rng, 13, 2, 1.0);
  PropagateOptions forward, reversed;
  reversed.reverse_diagonals = true;
  const auto a = propagate_grid(x, y, 14, forward);
  const auto b = propagate_grid(x, y, 14, reversed);
  CHECK(a.value == b.value);
  CHECK(a.grid == b.grid);
}

TEST_CASE("thread count does not change the bits") {
  datagen::Rng rng(89);
  const auto x = testutil::random_series(rng, 21, 3, 1.0);
  const auto y = testutil::random_series(rng, 21, 3, 1.0);
  PropagateOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = propagate_grid(x, y, 12, one);
  const auto b = propagate_grid(x, y, 12, four);
  CHECK(a.value == b.value);
  CHECK(a.grid == b.grid);
}

TEST_CASE("memory contract: two diagonals of series at most") {
  datagen::Rng rng(55);
  const std::pair<std::size_t, std::size_t> shapes[] = {
      {2, 2}, {5, 5}, {17, 17}, {33, 9}, {9, 33}, {64, 64}};
  for (auto [lx, ly] : shapes) {
    const auto x = testutil::random_series(rng, lx, 1, 0.5);
    const auto y = testutil::random_series(rng, ly, 1, 0.5);
    const auto result = propagate(x, y, 8);
    CHECK(result.peak_live_series <= 2 * std::min(lx, ly) + 4);
    CHECK(result.peak_live_series >= 2);
  }
}

TEST_CASE("grid output") {
  const auto x = series_1d({0.0, 1.0});
  const auto single = propagate_grid(x, x, 16);
  REQUIRE(single.grid.size() == 4);
  CHECK(single.grid[0] == 1.0);
  CHECK(single.grid[1] == 1.0);
  CHECK(single.grid[2] == 1.0);
  CHECK(single.grid[3] == single.value);

  datagen::Rng rng(321);
  const auto z = testutil::random_series(rng, 7, 2, 1.0);
  const auto self = propagate_grid(z, z, 20);
  for (std::size_t a = 0; a < 7; ++a) {
    CHECK(self.grid[a * 7] == 1.0);
    CHECK(self.grid[a] == 1.0);
    for (std::size_t b = 0; b < 7; ++b)
      CHECK(self.grid[a * 7 + b] ==
            doctest::Approx(self.grid[b * 7 + a]).epsilon(1e-12));
  }

  // knot values agree with the finite-difference oracle on an asymmetric pair
  const auto u = testutil::random_series(rng, 4, 2, 0.7);
  const auto v = testutil::random_series(rng, 4, 2, 0.7);
  const auto grid = propagate_grid(u, v, 24);
  const auto fd = oracle::goursat_fd_grid(u, v, 64);
  const std::size_t stride = 3 * 64 + 1;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      CHECK(grid.grid[a * 4 + b] ==
            doctest::Approx(fd[(a * 64) * stride + b * 64]).epsilon(2e-4));
}

TEST_CASE("input validation and overflow guard") {
  const auto x = series_1d({0.0, 1.0});
  CHECK_THROWS_AS(propagate(x, TimeSeries({0.0, 0.0, 1.0, 1.0}, 2), 8), std::invalid_argument);
  CHECK_THROWS_AS(propagate(x, x, 0), std::invalid_argument);
  CHECK_THROWS_AS(propagate(x, x, 65), std::invalid_argument);
  CHECK_THROWS_AS(propagate(TimeSeries({1.0}, 1), x, 8), std::invalid_argument);

  try {
    propagate(series_1d({0.0, 400.0}), series_1d({0.0, 400.0}), 24);
    FAIL("expected overflow");
  } catch (const NumericOverflowError& e) {
    CHECK(e.tile_k() == 1);
    CHECK(e.tile_l() == 1);
    CHECK(std::string(e.what()).find("rescale") != std::string::npos);
  }
}

TEST_CASE("rectangular propagation matches padded propagation") {
  const auto x = series_1d({0.0, 1.0});
  const auto y = series_1d({0.0, 0.3, 0.9});
  const double rect = propagate(x, y, 24).value;
  const double padded = propagate(pad_to_length(x, 3), y, 24).value;
  CHECK(rect == doctest::Approx(padded).epsilon(1e-13));
  CHECK(rect == doctest::Approx(testutil::diagonal_series(0.9, 24)).epsilon(1e-12));
}

TEST_CASE("policy-driven propagation") {
  const auto x = series_1d({0.0, 1.0});
  const auto fixed = propagate_with_policy(x, x, TruncationPolicy::fixed(24));
  CHECK(fixed.order == 24);
  const auto adaptive = propagate_with_policy(x, x, TruncationPolicy::adaptive(1e-12));
  CHECK(adaptive.order == 10);
  CHECK(adaptive.order_converged);
  CHECK(std::abs(adaptive.value - fixed.value) < 1e-10);
}

TEST_SUITE_END();
