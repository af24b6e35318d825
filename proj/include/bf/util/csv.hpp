#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bf::util {

// Shortest round-trip decimal representation of a 64-bit float.
std::string format_double(double v);

// Strict parse: the whole field must be consumed. Returns false on failure
// (including inf/nan spellings, which the CSV schemas reject).
bool parse_double(std::string_view s, double& out);

bool parse_int(std::string_view s, long long& out);

std::vector<std::string> split(std::string_view line, char sep);

// Reads a whole text file into lines (without trailing '\n' / '\r').
// Throws std::runtime_error when the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

void write_file(const std::string& path, const std::string& contents);

}  // namespace bf::util
