// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hewflow/common/error.h"
#include "hewflow/engine/engine.h"

namespace hewflow::engine {

std::vector<int> classify(const Samples& scores, double threshold) {
  std::vector<int> labels;
  labels.reserve(scores.size());
  for (const auto& row : scores) {
    if (row.size() == 1) {
      labels.push_back(row[0] > threshold ? 1 : 0);
    } else {
      labels.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) -
                                        row.begin()));
    }
  }
  return labels;
}

DeviationReport compare_outputs(const Samples& actual, const Samples& expected,
                                double threshold) {
  if (actual.size() != expected.size()) {
    throw ValidationError("compared outputs have " + std::to_string(actual.size()) +
                          " and " + std::to_string(expected.size()) + " rows");
  }
  DeviationReport report;
  report.samples = actual.size();
  if (actual.empty()) return report;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  size_t count = 0;
  for (size_t r = 0; r < actual.size(); ++r) {
    if (actual[r].size() != expected[r].size()) {
      throw ValidationError("row " + std::to_string(r) + " widths differ");
    }
    for (size_t c = 0; c < actual[r].size(); ++c) {
      const double err = std::fabs(actual[r][c] - expected[r][c]);
      report.max_abs_error = std::max(report.max_abs_error, err);
      sum += err;
      ++count;
      lo = std::min(lo, expected[r][c]);
      hi = std::max(hi, expected[r][c]);
    }
  }
  report.mean_abs_error = count ? sum / count : 0.0;
  report.score_range = count ? hi - lo : 0.0;
  report.mean_error_over_range =
      report.score_range > 0 ? report.mean_abs_error / report.score_range : 0.0;
  const auto a = classify(actual, threshold), b = classify(expected, threshold);
  size_t agree = 0;
  for (size_t r = 0; r < a.size(); ++r) agree += a[r] == b[r];
  report.agreement = static_cast<double>(agree) / a.size();
  return report;
}

}  // namespace hewflow::engine
