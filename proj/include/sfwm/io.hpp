#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sfwm::io {

// 17 significant digits, round-trips any double.
std::string fmt(double v);

std::vector<std::string> split_csv_line(std::string_view line);
bool parse_double(std::string_view text, double& out);

// Writes to a sibling temp file then renames over path.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Dense real matrix as CSV, one row per line.
std::vector<std::vector<double>> read_csv_matrix(const std::string& path);

}  // namespace sfwm::io
