#pragma once

#include <algorithm>
#include <charconv>
#include <limits>
#include <initializer_list>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "mtt/error.hpp"

namespace mtt::csv {

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

/// Reads a headered CSV and checks the header matches `expected` exactly.
inline Table read(std::istream& in, std::initializer_list<std::string_view> expected) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split_line(line);
  if (t.header.size() != expected.size() || !std::equal(t.header.begin(), t.header.end(), expected.begin()))
    throw FormatError("csv: unexpected header '" + line + "'");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != expected.size())
      throw FormatError("csv row " + std::to_string(t.rows.size() + 2) + ": expected " +
                        std::to_string(expected.size()) + " fields");
    t.rows.push_back(std::move(fields));
  }
  return t;
}

inline double parse_double(const std::string& s, std::size_t row) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw FormatError("csv row " + std::to_string(row + 2) + ": bad number '" + s + "'");
  }
  return v;
}

inline long long parse_int(const std::string& s, std::size_t row) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("csv row " + std::to_string(row + 2) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace mtt::csv
