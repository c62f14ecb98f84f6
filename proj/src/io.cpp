#include "pmech/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pmech::io {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw IoError("cannot format number");
  return {buf, ptr};
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os_ << ',';
    os_ << csv_field(fields[i]);
  }
  os_ << "\r\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> f;
  f.reserve(values.size());
  for (double v : values) f.push_back(format_double(v));
  row(f);
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  std::size_t i = 0;
  auto end_record = [&] {
    row.push_back(std::move(field));
    field.clear();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      if (!field.empty()) throw IoError("stray quote inside unquoted CSV field");
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      field += c;
      any = true;
    }
    ++i;
  }
  if (quoted) throw IoError("unterminated quoted CSV field");
  if (any || !field.empty() || !row.empty()) end_record();
  return rows;
}

void write_grid_csv(std::ostream& os, const grid::Grid2D& g) {
  CsvWriter w(os);
  w.row(std::vector<std::string>{"q", "p", "re", "im"});
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      w.row(std::vector<double>{g.axis0().at(i), g.axis1().at(j), g(i, j).real(), g(i, j).imag()});
}

namespace {

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw IoError("bad number in grid header: " + s);
  return v;
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

grid::Axis read_axis(std::istream& is, const char* label) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("truncated grid header");
  std::istringstream ls(line);
  std::string tag, lo, hi;
  std::size_t n = 0;
  if (!(ls >> tag >> lo >> hi >> n) || tag != label) throw IoError("bad axis line in grid header");
  grid::Axis a{parse_hex(lo), parse_hex(hi), n};
  a.validate();
  return a;
}

void expect_line(std::istream& is, std::string_view want) {
  std::string line;
  if (!std::getline(is, line) || line != want)
    throw IoError("grid header: expected '" + std::string(want) + "'");
}

}  // namespace

void write_grid_binary(std::ostream& os, const grid::Grid2D& g) {
  os << "PMGRID 1\n"
     << "dims 2\n"
     << "axis0 " << hex(g.axis0().min) << ' ' << hex(g.axis0().max) << ' ' << g.axis0().n << '\n'
     << "axis1 " << hex(g.axis1().min) << ' ' << hex(g.axis1().max) << ' ' << g.axis1().n << '\n'
     << "data complex128-le\n\n";
  for (const Complex& z : g.values()) {
    for (double part : {z.real(), z.imag()}) {
      const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(part));
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!os) throw IoError("failed writing grid");
}

grid::Grid2D read_grid_binary(std::istream& is) {
  expect_line(is, "PMGRID 1");
  expect_line(is, "dims 2");
  const grid::Axis a0 = read_axis(is, "axis0");
  const grid::Axis a1 = read_axis(is, "axis1");
  expect_line(is, "data complex128-le");
  expect_line(is, "");
  std::vector<Complex> values(a0.n * a1.n);
  for (Complex& z : values) {
    double parts[2];
    for (double& part : parts) {
      std::uint64_t bits = 0;
      if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw IoError("truncated grid data");
      part = std::bit_cast<double>(to_le(bits));
    }
    z = {parts[0], parts[1]};
  }
  return grid::Grid2D(a0, a1, std::move(values));
}

nlohmann::json report_envelope(std::string_view command, const nlohmann::json& config) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"config", config}};
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace pmech::io
