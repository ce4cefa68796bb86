#include "rsvdlab/matrix_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "rsvdlab/error.hpp"

namespace rsvdlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, std::size_t line, std::size_t col) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", field " +
                                           std::to_string(col) + ": not a finite number '" +
                                           std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

DenseMatrix parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;

    std::vector<double> row;
    std::size_t col = 0;
    for (;;) {
      const auto comma = line.find(',');
      row.push_back(parse_field(line.substr(0, comma), line_no, ++col));
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + " has " +
                                             std::to_string(row.size()) + " values, expected " +
                                             std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::ParseError, "matrix file is empty");
  return DenseMatrix::from_rows(rows);
}

std::string serialize_csv(const DenseMatrix& a) {
  std::string out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(a(i, j));
    }
    out += '\n';
  }
  return out;
}

DenseMatrix read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open matrix file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

void write_csv_file(const std::filesystem::path& path, const DenseMatrix& a) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << serialize_csv(a);
}

}  // namespace rsvdlab
