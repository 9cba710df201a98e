#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ergoalloc {

/// Tabular outputs start with this comment line.
inline constexpr std::string_view kSchemaLine = "# ergoalloc schema 1";

/// Fixed-point rendering, identical across runs.
std::string fixed(double v, int precision = 6);

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Quotes a CSV field if it contains separators or quotes.
std::string csv_field(std::string_view s);

}  // namespace ergoalloc
