#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sawdil {

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

// Whole-field parses; throw IoError naming `what` on any defect.
double parse_double(std::string_view s, const char* what);
long long parse_integer(std::string_view s, const char* what);
unsigned long long parse_unsigned(std::string_view s, const char* what);

// Comma-separated fields, no quoting.
std::vector<std::string_view> split_csv(std::string_view line);

}  // namespace sawdil
