// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <string>
#include <vector>

namespace hewflow::io {

/// Header row of names, then one row of decimal values per sample.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Throws ValidationError citing `source:row:column` (1-based, header is
/// row 1) for ragged rows, empty cells and non-numeric values.
Table parse_csv(std::istream& in, const std::string& source);
Table read_csv(const std::string& path);
void write_csv(const std::string& path, const Table& table);

}  // namespace hewflow::io
