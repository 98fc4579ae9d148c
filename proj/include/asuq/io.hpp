#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asuq::io {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Whole-field parse; rejects trailing garbage and empty fields.
std::optional<double> parse_double(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary and renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace asuq::io
