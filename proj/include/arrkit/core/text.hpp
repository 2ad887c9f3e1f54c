#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace arrkit {

// Shortest representation that parses back to the same double.
std::string format_double(double v);

double parse_double(std::string_view s);

std::vector<std::string_view> split(std::string_view line, char sep);

std::string_view trim(std::string_view s);

// 64-bit FNV-1a, used for config and calendar fingerprints.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace arrkit
