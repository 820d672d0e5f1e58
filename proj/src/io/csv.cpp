// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/io/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hewflow/common/error.h"

namespace hewflow::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Table parse_csv(std::istream& in, const std::string& source) {
  Table table;
  std::string line;
  size_t row = 0;
  auto where = [&](size_t r, size_t c) {
    return source + ":" + std::to_string(r) + ":" + std::to_string(c) + ": ";
  };
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    for (auto& c : cells) c = trim(c);
    if (table.header.empty()) {
      for (size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].empty()) throw ValidationError(where(row, c + 1) + "empty column name");
      }
      table.header = cells;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ValidationError(where(row, std::min(cells.size(), table.header.size()) + 1) +
                            "row has " + std::to_string(cells.size()) + " columns, header has " +
                            std::to_string(table.header.size()));
    }
    std::vector<double> values(cells.size());
    for (size_t c = 0; c < cells.size(); ++c) {
      const std::string& s = cells[c];
      const char* end = s.data() + s.size();
      const auto [ptr, ec] = std::from_chars(s.data(), end, values[c]);
      if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(values[c])) {
        throw ValidationError(where(row, c + 1) + "'" + s + "' is not a finite number");
      }
    }
    table.rows.push_back(std::move(values));
  }
  if (table.header.empty()) throw ValidationError(source + ": missing header row");
  return table;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  return parse_csv(in, path);
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out.precision(std::numeric_limits<double>::max_digits10);
  for (size_t c = 0; c < table.header.size(); ++c) {
    out << (c ? "," : "") << table.header[c];
  }
  out << '\n';
  for (const auto& r : table.rows) {
    for (size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
    out << '\n';
  }
  if (!out) throw ValidationError("failed writing " + path);
}

}  // namespace hewflow::io
