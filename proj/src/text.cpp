#include "sawdil/text.hpp"

#include <charconv>

#include "sawdil/errors.hpp"

namespace sawdil {
namespace {

template <class T>
T parse_whole(std::string_view s, const char* what) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw IoError(std::string("bad number for ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const char* what) { return parse_whole<double>(s, what); }
long long parse_integer(std::string_view s, const char* what) { return parse_whole<long long>(s, what); }
unsigned long long parse_unsigned(std::string_view s, const char* what) {
  return parse_whole<unsigned long long>(s, what);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace sawdil
