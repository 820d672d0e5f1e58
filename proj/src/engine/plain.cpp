// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "hewflow/common/error.h"
#include "hewflow/engine/engine.h"

namespace hewflow::engine {

using compiler::OpKind;

Samples execute_plain(const compiler::CompiledCircuit& circuit, const Samples& samples) {
  const size_t batch = samples.size();
  for (size_t r = 0; r < batch; ++r) {
    if (samples[r].size() != circuit.input_count) {
      throw ValidationError("sample " + std::to_string(r) + " has " +
                            std::to_string(samples[r].size()) + " features, circuit expects " +
                            std::to_string(circuit.input_count));
    }
  }
  // Lane-major values: values[v][sample].
  std::vector<std::vector<double>> values(circuit.value_count);
  for (size_t i = 0; i < circuit.input_count; ++i) {
    values[i].resize(batch);
    for (size_t r = 0; r < batch; ++r) values[i][r] = samples[r][i];
  }
  for (const compiler::Op* op : circuit.ops()) {
    const auto& a = values[op->src[0]];
    auto& out = values[op->dst];
    out.resize(batch);
    switch (op->kind) {
      case OpKind::kMulPlain:
        for (size_t r = 0; r < batch; ++r) out[r] = a[r] * op->constant;
        break;
      case OpKind::kAddCt: {
        const auto& b = values[op->src[1]];
        for (size_t r = 0; r < batch; ++r) out[r] = a[r] + b[r];
        break;
      }
      case OpKind::kAddPlain:
        for (size_t r = 0; r < batch; ++r) out[r] = a[r] + op->constant;
        break;
      case OpKind::kMulCt: {
        const auto& b = values[op->src[1]];
        for (size_t r = 0; r < batch; ++r) out[r] = a[r] * b[r];
        break;
      }
      case OpKind::kRescale:
      case OpKind::kModSwitch:
        out = a;
        break;
    }
  }
  Samples rows(batch, std::vector<double>(circuit.outputs.size()));
  for (size_t j = 0; j < circuit.outputs.size(); ++j) {
    const auto& v = values[circuit.outputs[j]];
    for (size_t r = 0; r < batch; ++r) rows[r][j] = v[r];
  }
  return rows;
}

}  // namespace hewflow::engine
