#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace fewcycle::cli {

/// Shortest decimal string that reads back to the same binary64 value.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Writes `content` to `path` through a sibling temporary and a rename, so
/// readers never observe a half-written file. "-" means standard output.
inline void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    os << content;
    if (!os) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw std::runtime_error("cannot move output into place: " + ec.message());
}

/// A parsed CSV: `#` lines are comments, the first other line is the header.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::ptrdiff_t column(std::string_view name) const {
    for (std::size_t n = 0; n < header.size(); ++n)
      if (header[n] == name) return static_cast<std::ptrdiff_t>(n);
    return -1;
  }
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line);
      continue;
    }
    auto fields = split(line, ',');
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != table.header.size())
        throw std::invalid_argument("row with " + std::to_string(fields.size()) + " fields, header has " +
                                    std::to_string(table.header.size()));
      table.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw std::invalid_argument("CSV has no header line");
  return table;
}

}  // namespace fewcycle::cli
