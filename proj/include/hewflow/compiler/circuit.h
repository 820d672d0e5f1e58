// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hewflow/ckks/params.h"
#include "hewflow/compiler/packing.h"

namespace hewflow::compiler {

enum class OpKind : uint8_t {
  kMulPlain,
  kAddCt,
  kAddPlain,
  kMulCt,
  kRescale,
  kModSwitch,
};

inline constexpr size_t kOpKindCount = 6;

std::string to_string(OpKind kind);

using ValueId = uint32_t;
inline constexpr ValueId kNoValue = UINT32_MAX;

/// One primitive encrypted operation in SSA form. Values 0..input_count-1
/// are the circuit inputs.
struct Op {
  OpKind kind = OpKind::kAddCt;
  ValueId dst = kNoValue;
  std::array<ValueId, 2> src{kNoValue, kNoValue};
  /// MulPlain multiplier or AddPlain addend, broadcast to all slots.
  double constant = 0.0;
  /// Encoding scale of the MulPlain constant (set by level planning).
  double constant_scale = 0.0;
  /// MulPlain only: after the following rescale the result must land exactly
  /// on this value's level and scale so the two can be added.
  std::optional<ValueId> align_to;
  /// Annotations from level planning: result level and scale.
  size_t level = 0;
  double scale = 0.0;
  /// Ops sharing a composite id form one fused multiply-accumulate kernel.
  int composite = -1;
  /// 1-based model layer that emitted the op.
  int layer = 0;

  size_t src_count() const;
};

enum class GroupRole { kMatmul, kBias, kActivation, kFused };

/// A unit of dispatch. Unfused circuits carry one group per stage
/// (matmul, bias, activation); fused circuits one per layer unit.
struct TaskGroup {
  std::string label;
  GroupRole role = GroupRole::kMatmul;
  int layer = 0;
  int unit = 0;
  std::vector<Op> ops;
};

enum class RescaleMode { kEager, kOff };

std::string to_string(RescaleMode mode);

struct CompiledCircuit {
  std::string model_name;
  size_t input_count = 0;
  std::vector<ValueId> outputs;
  std::vector<TaskGroup> groups;
  ValueId value_count = 0;
  bool fused = false;
  bool planned = false;
  RescaleMode rescale_mode = RescaleMode::kEager;
  /// Level and scale at which input ciphertexts are supplied.
  size_t input_level = 0;
  double input_scale = 0.0;
  /// Level at which computation starts after the initial mod-switch.
  size_t entry_level = 0;
  int depth = 0;
  /// Levels consumed; the scheduler's priority key.
  int modulus_depth = 0;
  ckks::ParamsHash params_hash{};
  PackingPlan packing;

  size_t op_count() const;
  std::map<OpKind, size_t> op_counts() const;
  std::vector<const Op*> ops() const;
};

/// Checks SSA well-formedness (operands defined before use, single
/// definitions, outputs defined) and, for planned circuits, replays the
/// level/scale algebra of the scheme against every annotation. Throws
/// ValidationError or DepthError.
void validate_circuit(const CompiledCircuit& circuit,
                      const ckks::SchemeParams* params = nullptr);

/// One op per line: "L<level> <OP> <dst> <srcs...> scale=<s>".
std::string dump_circuit(const CompiledCircuit& circuit);

}  // namespace hewflow::compiler
