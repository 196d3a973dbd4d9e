#include "sigker/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "sigker/errors.hpp"

namespace sigker {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_cell(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + cell.size();
}

}  // namespace

TimeSeries parse_csv(std::istream& in, const std::string& name) {
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t row = 0;
  std::size_t data_rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    std::vector<double> parsed(cells.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_cell(cells[c], parsed[c])) {
        numeric = false;
        bad_col = c + 1;
        break;
      }
    }
    if (!numeric) {
      // A single leading non-numeric row is treated as a header.
      if (data_rows == 0 && row == 1) continue;
      throw ParseError(name + ": non-numeric cell at row " + std::to_string(row) +
                           ", column " + std::to_string(bad_col),
                       row, bad_col);
    }
    if (dim == 0) {
      dim = parsed.size();
    } else if (parsed.size() != dim) {
      throw ParseError(name + ": ragged row " + std::to_string(row) + " has " +
                           std::to_string(parsed.size()) + " cells, expected " +
                           std::to_string(dim),
                       row, parsed.size());
    }
    for (std::size_t c = 0; c < parsed.size(); ++c) {
      if (!std::isfinite(parsed[c]))
        throw ParseError(name + ": non-finite value at row " + std::to_string(row) +
                             ", column " + std::to_string(c + 1),
                         row, c + 1);
    }
    values.insert(values.end(), parsed.begin(), parsed.end());
    ++data_rows;
  }
  if (data_rows == 0) throw ParseError(name + ": no data rows", 0, 0);
  return TimeSeries(std::move(values), dim);
}

TimeSeries load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
  return parse_csv(in, path.string());
}

void write_csv(const TimeSeries& ts, std::ostream& out) {
  write_matrix_csv({ts.values().begin(), ts.values().end()}, ts.length(), ts.dim(), out);
}

void save_csv(const TimeSeries& ts, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(ts, out);
}

void write_matrix_csv(const std::vector<double>& values, std::size_t rows,
                      std::size_t cols, std::ostream& out) {
  char buf[40];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", values[r * cols + c]);
      out << buf;
      if (c + 1 < cols) out << ',';
    }
    out << '\n';
  }
}

void save_matrix_csv(const std::vector<double>& values, std::size_t rows,
                     std::size_t cols, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_matrix_csv(values, rows, cols, out);
}

}  // namespace sigker
