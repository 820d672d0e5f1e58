// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "hewflow/ckks/params.h"
#include "hewflow/compiler/circuit.h"
#include "hewflow/compiler/model.h"

namespace hewflow::compiler {

/// Bits kept free above the running scale when rescaling is disabled.
inline constexpr double kOffModeHeadroomBits = 10.0;

struct CompileOptions {
  bool fuse = true;
  RescaleMode rescale = RescaleMode::kEager;
};

/// Toeplitz lowering with valid padding. Row (oc*OH + oy)*OW + ox reads
/// input (ic*H + iy)*W + ix.
DenseLayer lower_conv_to_dense(const Conv2DLayer& conv);

/// Unplanned, unfused SSA circuit: matmul, bias and activation groups.
/// Exactly-zero weights are skipped.
CompiledCircuit emit_circuit(const ModelGraph& model);

/// Merges each dense layer's groups with its following activation into one
/// group; every neuron's multiply-accumulate and bias add become one
/// composite. Idempotent. Expects an unplanned circuit.
CompiledCircuit fuse_operators(const CompiledCircuit& circuit);

/// Multiplicative depth of every value and of the whole circuit.
std::vector<int> value_depths(const CompiledCircuit& circuit);
int compute_depth(const CompiledCircuit& circuit);

/// Annotates levels and scales and inserts RESCALE and MOD_SWITCH ops.
/// Throws DepthError naming the first layer that exceeds the limb budget.
CompiledCircuit plan_levels(const CompiledCircuit& circuit,
                            const ckks::SchemeParams& params,
                            RescaleMode mode = RescaleMode::kEager);

/// plan_packing, emit, optional fusion, plan_levels and validation.
CompiledCircuit compile(const ModelGraph& model, const ckks::SchemeParams& params,
                        size_t batch_size, const CompileOptions& options = {});

}  // namespace hewflow::compiler
