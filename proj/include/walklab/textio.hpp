#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace walklab {

// Shortest round-trip decimal form (std::to_chars); the one true float
// format for layouts, configs, and CSVs so serialization is byte-stable.
std::string format_double(double v);

// Strict full-string parses; throw ValidationError on trailing garbage.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delim);

struct KeyValueLine {
  std::string key;
  std::string value;
  int line_no = 0;
};

// Line-based `key = value` format shared by layouts, configs, and models.
// Blank lines and `#` comments are skipped; anything else without '=' is an
// error tagged with its line number.
std::vector<KeyValueLine> parse_key_values(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace walklab
