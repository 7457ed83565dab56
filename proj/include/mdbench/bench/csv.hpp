#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdbench {

/// Shortest text for a double at 17 significant digits; parses back exactly.
std::string format_double(double v);
/// Empty string for nullopt.
std::string format_optional(const std::optional<double>& v);

/// Header plus rows of raw fields. Comma separated, LF line ends, no quoting
/// (no field ever contains a comma).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws when absent
  std::optional<double> number(std::size_t row, std::size_t col) const;
};

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace mdbench
