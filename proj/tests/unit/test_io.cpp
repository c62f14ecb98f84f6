#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

#include "pmech/io.hpp"

using namespace pmech;
using namespace pmech::io;

TEST_CASE("doubles print in shortest round-trip form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  for (double v : {1.0 / 3.0, std::numbers::pi, 6.02214076e23, -std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()})
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("CSV fields are quoted only when needed") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  std::ostringstream os;
  CsvWriter w(os);
  w.row(std::vector<std::string>{"x", "y,z"});
  w.row(std::vector<double>{0.5, -1.0});
  CHECK(os.str() == "x,\"y,z\"\r\n0.5,-1\r\n");
}

TEST_CASE("CSV parsing follows RFC 4180") {
  const auto rows = parse_csv("a,\"b,c\",\"d\"\"e\"\r\n1,,\"x\ny\"\n3,4,5");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(rows[1] == std::vector<std::string>{"1", "", "x\ny"});
  CHECK(rows[2] == std::vector<std::string>{"3", "4", "5"});
  CHECK_THROWS_AS(parse_csv("\"open"), IoError);
}

TEST_CASE("written CSV parses back to the same fields") {
  const std::vector<std::string> fields{"q,p", "\"", "", "line\r\nbreak", "z"};
  std::ostringstream os;
  CsvWriter(os).row(fields);
  const auto back = parse_csv(os.str());
  REQUIRE(back.size() == 1);
  CHECK(back[0] == fields);
}

TEST_CASE("grid CSV has one row per sample") {
  const auto a = grid::Axis::centered(1.0, 2);
  const auto g = grid::sample(a, a, [](double q, double p) { return Complex(q, p); });
  std::ostringstream os;
  write_grid_csv(os, g);
  const auto rows = parse_csv(os.str());
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"q", "p", "re", "im"});
  CHECK(std::stod(rows[2][1]) == a.at(1));
  CHECK(std::stod(rows[2][3]) == a.at(1));
}

TEST_CASE("binary grids round-trip bit for bit") {
  const grid::Axis a0{-1.0 / 3.0, 2.0 / 7.0, 6}, a1{-2.5, 2.5, 4};
  const auto g = grid::sample(a0, a1, [](double q, double p) { return Complex(std::sin(q * 11), std::exp(p)); });
  std::stringstream ss;
  write_grid_binary(ss, g);
  const auto back = read_grid_binary(ss);
  CHECK(back.axis0().min == a0.min);
  CHECK(back.axis0().max == a0.max);
  CHECK(back.axis1().n == 4);
  CHECK(grid::max_abs(back - g) == 0.0);
}

TEST_CASE("malformed binary grids are rejected") {
  std::stringstream bad("PMGRID 2\n");
  CHECK_THROWS_AS(read_grid_binary(bad), IoError);
  const auto a = grid::Axis::centered(1.0, 4);
  std::stringstream ss;
  write_grid_binary(ss, grid::Grid2D(a, a));
  std::string text = ss.str();
  text.resize(text.size() - 8);
  std::stringstream cut(text);
  CHECK_THROWS_AS(read_grid_binary(cut), IoError);
}

TEST_CASE("report envelope and file errors") {
  const auto j = report_envelope("brackets", {{"n", 1}});
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["command"] == "brackets");
  CHECK(j["config"]["n"] == 1);
  CHECK_THROWS_AS(write_file("/nonexistent-dir/x.json", "{}"), IoError);
}
