#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pmech/grid.hpp"

namespace pmech::io {

inline constexpr int kSchemaVersion = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// Quotes a field when it holds a comma, quote, CR or LF (RFC 4180).
std::string csv_field(std::string_view text);

/// Writes CRLF-terminated RFC 4180 records.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& fields);
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
};

/// Parses RFC 4180 text into records (quoted fields, doubled quotes, CRLF or LF).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Columns q, p, re, im; one row per sample, q slowest.
void write_grid_csv(std::ostream& os, const grid::Grid2D& g);

/// Binary dump: a text header
///   PMGRID 1
///   dims 2
///   axis0 <min> <max> <n>
///   axis1 <min> <max> <n>
///   data complex128-le
/// followed by an empty line and rows*cols (re, im) little-endian doubles.
/// Bounds are written in hexadecimal floating point so they round-trip exactly.
void write_grid_binary(std::ostream& os, const grid::Grid2D& g);
grid::Grid2D read_grid_binary(std::istream& is);

/// {"schema_version", "command", "config", ...}: the envelope every JSON report uses.
nlohmann::json report_envelope(std::string_view command, const nlohmann::json& config);

/// Writes text to a file, throwing IoError on failure.
void write_file(const std::string& path, std::string_view text);

}  // namespace pmech::io
