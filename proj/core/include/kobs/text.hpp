#pragma once

// Parsing and formatting helpers shared by the config readers and the CSV
// writers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace kobs {

/// Shortest "%.17g" rendering; round-trips every finite double.
std::string format_double(double v);

int parse_int(const std::string& s, const std::string& what);
std::uint64_t parse_u64(const std::string& s, const std::string& what);
double parse_double(const std::string& s, const std::string& what);

/// Splits on commas and trims whitespace; empty input gives an empty list.
std::vector<std::string> split_list(const std::string& s);
std::string join_list(const std::vector<std::string>& items);

std::string trim(const std::string& s);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// `key = value` lines with '#' comments. The optional `schema_version` key is
/// checked against `schema_version` and not returned.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text, int schema_version);

}  // namespace kobs
