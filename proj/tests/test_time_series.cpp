#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "helpers.hpp"
#include "sigker/csv.hpp"
#include "sigker/errors.hpp"
#include "sigker/time_series.hpp"

using namespace sigker;
using testutil::series_1d;

TEST_SUITE_BEGIN("time_series");

TEST_CASE("construction validates shape and finiteness") {
  CHECK_THROWS_AS(TimeSeries({}, 1), std::invalid_argument);
  CHECK_THROWS_AS(TimeSeries({1.0, 2.0, 3.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(TimeSeries({0.0, std::numeric_limits<double>::quiet_NaN()}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(TimeSeries({0.0, std::numeric_limits<double>::infinity()}, 1),
                  std::invalid_argument);
  const TimeSeries ts({0.0, 1.0, 2.0, 3.0}, 2);
  CHECK(ts.length() == 2);
  CHECK(ts.dim() == 2);
  CHECK(ts.point(1)[0] == 2.0);
}

TEST_CASE("pad_to_length") {
  const auto ts = series_1d({0.0, 1.0});
  CHECK(pad_to_length(ts, 2) == ts);

  const auto padded = pad_to_length(ts, 4);
  CHECK(padded == series_1d({0.0, 1.0, 1.0, 1.0}));

  const TimeSeries single({0.0, 0.0}, 2);
  const auto tripled = pad_to_length(single, 3);
  CHECK(tripled == TimeSeries({0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 2));

  CHECK_THROWS_AS(pad_to_length(ts, 1), std::invalid_argument);
}

TEST_CASE("increments") {
  CHECK(increments(series_1d({0.0, 1.0, 3.0})) == std::vector<double>{1.0, 2.0});
  CHECK(increments(series_1d({2.0, 2.0, 2.0})) == std::vector<double>{0.0, 0.0});
  CHECK(increments(TimeSeries({0.0, 0.0, 1.0, 2.0}, 2)) == std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(increments(TimeSeries({1.0}, 1)), std::invalid_argument);
}

TEST_CASE("rho basics") {
  const TimeSeries x({0.0, 0.0, 1.0, 0.0}, 2);  // increment (1, 0)
  const TimeSeries y({0.0, 0.0, 0.0, 1.0}, 2);  // increment (0, 1)
  const IncrementTable orth(x, y);
  CHECK(orth.rho(0, 0) == 0.0);

  const IncrementTable unit(series_1d({0.0, 1.0}), series_1d({0.0, 1.0}));
  CHECK(unit.rho(0, 0) == 1.0);

  const IncrementTable zero(series_1d({0.0, 0.0}), series_1d({0.0, 5.0}));
  CHECK(zero.rho(0, 0) == 0.0);

  CHECK_THROWS_AS(unit.rho(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(unit.rho(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(IncrementTable(x, series_1d({0.0, 1.0})), std::invalid_argument);
}

TEST_CASE("on-the-fly rho equals the materialized table exhaustively") {
  datagen::Rng rng(991);
  for (std::size_t len : {2u, 5u, 17u, 64u}) {
    const auto x = testutil::random_series(rng, len, 2, 1.5);
    const auto y = testutil::random_series(rng, len, 2, 1.5);
    const IncrementTable table(x, y);
    const auto full = table.materialize_table();
    double max_abs = 0.0;
    for (std::size_t k = 0; k < table.x_count(); ++k)
      for (std::size_t l = 0; l < table.y_count(); ++l) {
        CHECK(table.rho(k, l) == full[k * table.y_count() + l]);
        max_abs = std::max(max_abs, std::abs(full[k * table.y_count() + l]));
      }
    CHECK(table.max_abs_rho() == max_abs);
  }
}

TEST_CASE("rho is bilinear in the inputs") {
  datagen::Rng rng(42);
  const auto x = testutil::random_series(rng, 6, 3, 1.0);
  const auto y = testutil::random_series(rng, 6, 3, 1.0);
  const double c = 2.5;
  std::vector<double> scaled(x.values().begin(), x.values().end());
  for (auto& v : scaled) v *= c;
  const IncrementTable base(x, y);
  const IncrementTable stretched(TimeSeries(scaled, 3), y);
  for (std::size_t k = 0; k < base.x_count(); ++k)
    for (std::size_t l = 0; l < base.y_count(); ++l)
      CHECK(stretched.rho(k, l) == doctest::Approx(c * base.rho(k, l)).epsilon(1e-14));
}

TEST_CASE("midpoint insertion splits one increment into two halves") {
  const TimeSeries x({0.0, 0.0, 4.0, 2.0, 6.0, 8.0}, 2);
  const auto incs = increments(x);
  // insert the exact midpoint of segment 1
  const TimeSeries refined({0.0, 0.0, 4.0, 2.0, 5.0, 5.0, 6.0, 8.0}, 2);
  const auto rincs = increments(refined);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(rincs[1 * 2 + c] + rincs[2 * 2 + c] == incs[1 * 2 + c]);
    CHECK(rincs[0 * 2 + c] == incs[0 * 2 + c]);
  }
}

TEST_CASE("csv parsing") {
  {
    std::istringstream in("0\n1\n");
    CHECK(parse_csv(in) == series_1d({0.0, 1.0}));
  }
  {
    std::istringstream in("0,0\n1,2\n");
    CHECK(parse_csv(in) == TimeSeries({0.0, 0.0, 1.0, 2.0}, 2));
  }
  {
    std::istringstream in("t,value\n0,0\n1,2\n");
    CHECK(parse_csv(in).length() == 2);  // single header row tolerated
  }
  {
    std::istringstream in("0,0\n1\n");
    CHECK_THROWS_AS(parse_csv(in), ParseError);
  }
  {
    std::istringstream in("0,0\n1,x\n");
    try {
      parse_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
      CHECK(e.column() == 2);
    }
  }
  {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_csv(in), ParseError);
  }
}

TEST_CASE("csv round trip is exact at full binary precision") {
  datagen::Rng rng(7);
  std::vector<double> values;
  for (int k = 0; k < 60; ++k)
    values.push_back((rng.uniform01() - 0.5) * std::pow(10.0, int(rng.uniform01() * 40) - 20));
  values[0] = 0.0;
  values[1] = -1.0 / 3.0;
  values[2] = 1e-300;
  const TimeSeries ts(values, 3);

  std::ostringstream out;
  write_csv(ts, out);
  std::istringstream in(out.str());
  CHECK(parse_csv(in) == ts);
}

TEST_SUITE_END();
