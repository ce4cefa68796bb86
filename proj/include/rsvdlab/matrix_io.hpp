#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rsvdlab/dense_matrix.hpp"

namespace rsvdlab {

// CSV: one row per line, comma separated, no header. Values are written with
// the shortest representation that round-trips, so parse(serialize(M)) == M.
DenseMatrix parse_csv(std::string_view text);
std::string serialize_csv(const DenseMatrix& a);

DenseMatrix read_csv_file(const std::filesystem::path& path);
void write_csv_file(const std::filesystem::path& path, const DenseMatrix& a);

// Shortest round-trip decimal for a double.
std::string format_double(double x);

}  // namespace rsvdlab
