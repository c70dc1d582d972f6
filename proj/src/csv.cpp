#include "modekit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "modekit/errors.hpp"

namespace modekit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

} // namespace

Dataset read_csv(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty())
      continue;
    std::size_t columns = 0;
    for (;;) {
      const auto comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      double v = 0.0;
      const char* end = cell.data() + cell.size();
      auto [ptr, ec] = std::from_chars(cell.data(), end, v);
      if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw InvalidInput("row " + std::to_string(line_no) + ": cannot parse '" +
                           std::string(cell) + "' as a finite number");
      data.values.push_back(v);
      ++columns;
      if (comma == std::string_view::npos)
        break;
      rest.remove_prefix(comma + 1);
    }
    if (data.rows == 0)
      data.dimension = columns;
    else if (columns != data.dimension)
      throw InvalidInput("row " + std::to_string(line_no) + ": expected " +
                         std::to_string(data.dimension) + " columns, found " +
                         std::to_string(columns));
    ++data.rows;
  }
  if (data.rows == 0)
    throw InvalidInput("input contains no observations");
  return data;
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw InvalidInput("cannot open '" + path + "'");
  return read_csv(in);
}

} // namespace modekit
