#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace graphfam::csv {

// Shortest decimal rendering that round-trips to the same double.
std::string format_double(double value);

// Strict double parser; throws ParseError on trailing garbage or empty input.
double parse_double(std::string_view text, std::string_view context);

// Splits one CSV line on commas. No quoting: fields written by this tool are
// validated to be comma-free.
std::vector<std::string> split_line(std::string_view line);

// Splits text into lines, tolerating a trailing newline and CRLF endings.
std::vector<std::string> split_lines(std::string_view text);

// Rejects fields that would corrupt the CSV output (comma, newline, CR).
void require_plain_field(std::string_view field, std::string_view context);

}  // namespace graphfam::csv
