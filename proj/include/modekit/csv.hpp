#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace modekit {

// Headerless numeric CSV: one observation per row, the same number of
// columns on every row.
struct Dataset {
  std::size_t rows = 0;
  std::size_t dimension = 0;
  std::vector<double> values; // row-major
};

// Throws InvalidInput naming the 1-based offending row. Blank lines are
// skipped; an input without any row is an error.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

} // namespace modekit
