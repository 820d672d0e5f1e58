// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/compiler/packing.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "hewflow/common/error.h"
#include "hewflow/compiler/model.h"

namespace hewflow::compiler {

PackingPlan plan_packing(const ModelGraph& model, size_t batch_size,
                         size_t slot_count) {
  if (batch_size == 0) {
    throw ValidationError("batch size must be positive");
  }
  if (batch_size > slot_count) {
    throw ValidationError("batch size " + std::to_string(batch_size) +
                          " exceeds " + std::to_string(slot_count) + " slots");
  }
  PackingPlan plan;
  plan.batch_size = batch_size;
  plan.slot_count = slot_count;
  plan.feature_count = model.input_width();
  plan.feature_to_ciphertext.resize(plan.feature_count);
  std::iota(plan.feature_to_ciphertext.begin(), plan.feature_to_ciphertext.end(),
            size_t{0});
  plan.boundary_widths.push_back(plan.feature_count);
  for (size_t w : model.layer_widths()) plan.boundary_widths.push_back(w);
  plan.ciphertext_count =
      *std::max_element(plan.boundary_widths.begin(), plan.boundary_widths.end());
  return plan;
}

}  // namespace hewflow::compiler
