// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace hewflow::compiler {

struct ModelGraph;

enum class PackingLayout { kFeatureMajor };

/// Ciphertext j holds feature j of every sample; slot s holds sample s.
struct PackingPlan {
  PackingLayout layout = PackingLayout::kFeatureMajor;
  size_t batch_size = 0;
  size_t slot_count = 0;
  size_t feature_count = 0;
  /// feature index -> input ciphertext index
  std::vector<size_t> feature_to_ciphertext;
  /// Live ciphertexts at each layer boundary, starting with the input.
  std::vector<size_t> boundary_widths;
  /// Largest boundary width.
  size_t ciphertext_count = 0;

  double slot_utilization() const {
    return slot_count == 0 ? 0.0
                           : static_cast<double>(batch_size) / slot_count;
  }
};

/// Throws ValidationError when batch_size is 0 or exceeds slot_count.
PackingPlan plan_packing(const ModelGraph& model, size_t batch_size,
                         size_t slot_count);

}  // namespace hewflow::compiler
