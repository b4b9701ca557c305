#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace otoc {

inline constexpr const char* kVersion = "0.1.0";

// 12 significant digits, '.' decimal point, no locale surprises. Refuses
// NaN and infinities: a non-finite result is a bug upstream, never data.
std::string format_number(double v);

// format_number, or the empty cell for an absent value.
std::string csv_cell(const std::optional<double>& v);

// Writes content to path, creating parent directories. Throws
// std::runtime_error naming the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace otoc
