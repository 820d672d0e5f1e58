// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hewflow/compiler/model.h"

namespace hewflow::compiler {

/// Rows are samples; columns are standardized features.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
};

inline constexpr size_t kTabularFeatures = 30;
inline constexpr size_t kImageSide = 8;

/// 30 correlated Gaussian features, z-scored per column, labelled by a
/// planted linear rule.
Dataset synthetic_tabular(size_t samples, uint64_t seed);

/// 8x8 single-channel images with z-scored pixels and 10 planted classes.
Dataset synthetic_images(size_t samples, uint64_t seed);

/// 30 -> 1 dense plus degree-3 sigmoid. Depth 3.
ModelGraph reference_logistic(uint64_t seed = 1);
/// 30 -> 16 -> 8 -> 1 with square, square, degree-3 sigmoid. Depth 7.
ModelGraph reference_mlp(uint64_t seed = 2);
/// 8x8 -> conv 2x3x3 -> square -> 72 -> 16 -> square -> 16 -> 10. Depth 5.
ModelGraph reference_cnn(uint64_t seed = 3);

/// "logistic", "mlp" or "cnn". Throws ValidationError otherwise.
ModelGraph reference_model(const std::string& name, uint64_t seed);
/// Matching input distribution for a reference model.
Dataset reference_dataset(const std::string& name, size_t samples, uint64_t seed);

}  // namespace hewflow::compiler
