#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sigker/time_series.hpp"

namespace sigker {

// CSV layout: one time step per row, one dimension per column, UTF-8,
// decimal-point floats, optional single header row. Parse failures throw
// ParseError with the 1-based row/column location.
TimeSeries load_csv(const std::filesystem::path& path);
TimeSeries parse_csv(std::istream& in, const std::string& name = "<stream>");

// Values are written with 17 significant digits so load(save(ts)) == ts
// exactly for finite doubles. No header row is emitted.
void save_csv(const TimeSeries& ts, const std::filesystem::path& path);
void write_csv(const TimeSeries& ts, std::ostream& out);

// Plain rectangular matrix dump (used for Gram output and grid dumps).
void write_matrix_csv(const std::vector<double>& values, std::size_t rows,
                      std::size_t cols, std::ostream& out);
void save_matrix_csv(const std::vector<double>& values, std::size_t rows,
                     std::size_t cols, const std::filesystem::path& path);

}  // namespace sigker
