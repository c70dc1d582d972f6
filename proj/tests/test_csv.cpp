#include <doctest.h>

#include <sstream>

#include "modekit/csv.hpp"
#include "modekit/errors.hpp"

using namespace modekit;

TEST_CASE("csv parsing") {
  std::istringstream in("1.5,2\n-3e-2, 4.25\r\n\n0.1,0.2\n");
  const auto d = read_csv(in);
  CHECK(d.rows == 3);
  CHECK(d.dimension == 2);
  CHECK(d.values[2] == -0.03);
  CHECK(d.values[5] == 0.2);

  std::istringstream exact("0.1000000000000000055511151231257827\n");
  CHECK(read_csv(exact).values[0] == 0.1);
}

TEST_CASE("csv errors name the row") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), InvalidInput);
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_WITH_AS(read_csv(ragged), doctest::Contains("row 2"), InvalidInput);
  std::istringstream junk("1\nabc\n");
  CHECK_THROWS_WITH_AS(read_csv(junk), doctest::Contains("row 2"), InvalidInput);
  std::istringstream blank_cell("1,,2\n");
  CHECK_THROWS_AS(read_csv(blank_cell), InvalidInput);
  std::istringstream nan("nan\n");
  CHECK_THROWS_AS(read_csv(nan), InvalidInput);
  CHECK_THROWS_AS(read_csv_file("/nonexistent/file.csv"), InvalidInput);
}
