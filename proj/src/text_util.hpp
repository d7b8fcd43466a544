#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plum::detail {

using CsvRecord = std::pair<std::size_t, std::vector<std::string>>;

/// Splits comma-separated text into trimmed cells, keeping 1-based line
/// numbers. Blank lines and lines starting with '#' are skipped.
std::vector<CsvRecord> csv_records(std::string_view text);

std::optional<double> parse_double(std::string_view s);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

std::string read_file(const std::string& path);

}  // namespace plum::detail
