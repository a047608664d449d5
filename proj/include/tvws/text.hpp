#pragma once

// Small text helpers shared by the CSV / grid readers and writers.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tvws::text {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view text);
std::string to_lower(std::string_view s);

// Strict numeric parsing; the whole field must be consumed. `row` is used
// only for the ParseError message.
double parse_double(std::string_view s, std::size_t row, std::string_view field);
int parse_int(std::string_view s, std::size_t row, std::string_view field);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace tvws::text
