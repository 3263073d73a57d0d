#pragma once

// Minimal CSV reading shared by the star catalog and localities loaders.

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "astrolabe/exceptions.hpp"

namespace astrolabe::detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& text, const std::string& source, int line,
                            int column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(source, line, column, "expected a number, got '" + text + "'");
  }
}

/// Reads header-checked CSV rows, skipping blank and '#' lines.
template <typename Row>
std::vector<Row> read_csv(std::istream& in, const std::string& source,
                          const std::vector<std::string>& header,
                          Row (*make_row)(const std::vector<std::string>&, const std::string&, int)) {
  std::vector<Row> rows;
  std::string line;
  int line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto fields = split_csv_line(line);
    if (!seen_header) {
      if (fields != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw ParseError(source, line_no, 1, "expected header '" + expected + "'");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size())
      throw ParseError(source, line_no, 1,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    rows.push_back(make_row(fields, source, line_no));
  }
  if (!seen_header) throw ParseError(source, line_no + 1, 1, "missing CSV header");
  return rows;
}

/// 1-based column where field `index` starts, for error messages.
inline int field_column(const std::vector<std::string>& fields, std::size_t index) {
  int col = 1;
  for (std::size_t i = 0; i < index; ++i) col += static_cast<int>(fields[i].size()) + 1;
  return col;
}

}  // namespace astrolabe::detail
