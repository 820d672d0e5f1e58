// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/compiler/circuit.h"

#include <cmath>
#include <set>
#include <sstream>

#include "hewflow/ckks/evaluator.h"
#include "hewflow/common/error.h"

namespace hewflow::compiler {

std::string to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kMulPlain:
      return "MUL_PLAIN";
    case OpKind::kAddCt:
      return "ADD_CT";
    case OpKind::kAddPlain:
      return "ADD_PLAIN";
    case OpKind::kMulCt:
      return "MUL_CT";
    case OpKind::kRescale:
      return "RESCALE";
    case OpKind::kModSwitch:
      return "MOD_SWITCH";
  }
  return "UNKNOWN";
}

std::string to_string(RescaleMode mode) {
  return mode == RescaleMode::kEager ? "eager" : "off";
}

size_t Op::src_count() const {
  return kind == OpKind::kAddCt || kind == OpKind::kMulCt ? 2 : 1;
}

size_t CompiledCircuit::op_count() const {
  size_t count = 0;
  for (const auto& g : groups) count += g.ops.size();
  return count;
}

std::map<OpKind, size_t> CompiledCircuit::op_counts() const {
  std::map<OpKind, size_t> counts;
  for (const auto& g : groups) {
    for (const auto& op : g.ops) ++counts[op.kind];
  }
  return counts;
}

std::vector<const Op*> CompiledCircuit::ops() const {
  std::vector<const Op*> out;
  for (const auto& g : groups) {
    for (const auto& op : g.ops) out.push_back(&op);
  }
  return out;
}

namespace {

struct ValueInfo {
  size_t level = 0;
  double scale = 0.0;
};

bool close(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

std::string where(const Op& op) {
  return "op " + to_string(op.kind) + " -> v" + std::to_string(op.dst) +
         " (layer " + std::to_string(op.layer) + ")";
}

}  // namespace

void validate_circuit(const CompiledCircuit& circuit,
                      const ckks::SchemeParams* params) {
  if (params != nullptr && circuit.planned && circuit.params_hash != params->hash) {
    throw ValidationError("circuit was planned for different scheme params");
  }
  std::vector<bool> defined(circuit.value_count, false);
  std::vector<ValueInfo> info(circuit.value_count);
  for (size_t i = 0; i < circuit.input_count; ++i) {
    if (i >= defined.size()) throw ValidationError("value count below input count");
    defined[i] = true;
    info[i] = {circuit.input_level, circuit.input_scale};
  }
  const bool replay = circuit.planned && params != nullptr;
  std::set<int> closed_composites;
  int open_composite = -1;

  for (const auto& group : circuit.groups) {
    for (const Op& op : group.ops) {
      if (op.composite != open_composite) {
        if (open_composite >= 0) closed_composites.insert(open_composite);
        if (op.composite >= 0 && closed_composites.count(op.composite)) {
          throw ValidationError("composite " + std::to_string(op.composite) +
                                " is not contiguous");
        }
        open_composite = op.composite;
      }
      for (size_t s = 0; s < op.src_count(); ++s) {
        const ValueId v = op.src[s];
        if (v >= circuit.value_count || !defined[v]) {
          throw ValidationError(where(op) + " reads undefined value v" +
                                std::to_string(v));
        }
      }
      if (op.dst >= circuit.value_count || defined[op.dst]) {
        throw ValidationError(where(op) + " redefines or overflows its destination");
      }
      if (op.align_to && (*op.align_to >= circuit.value_count || !defined[*op.align_to])) {
        throw ValidationError(where(op) + " aligns to an undefined value");
      }
      defined[op.dst] = true;
      if (!replay) continue;

      const ValueInfo a = info[op.src[0]];
      ValueInfo out{};
      switch (op.kind) {
        case OpKind::kMulPlain:
          if (!(op.constant_scale > 0.0)) {
            throw ValidationError(where(op) + " has no constant scale");
          }
          out = {a.level, a.scale * op.constant_scale};
          break;
        case OpKind::kAddCt: {
          const ValueInfo b = info[op.src[1]];
          if (a.level != b.level) {
            throw ValidationError(where(op) + " adds operands at levels " +
                                  std::to_string(a.level) + " and " +
                                  std::to_string(b.level));
          }
          if (std::fabs(a.scale - b.scale) >
              ckks::kScaleTolerance * std::max(a.scale, b.scale)) {
            throw ValidationError(where(op) + " adds operands at different scales");
          }
          out = a;
          break;
        }
        case OpKind::kAddPlain:
          out = a;
          break;
        case OpKind::kMulCt: {
          const ValueInfo b = info[op.src[1]];
          if (a.level != b.level) {
            throw ValidationError(where(op) + " multiplies operands at levels " +
                                  std::to_string(a.level) + " and " +
                                  std::to_string(b.level));
          }
          out = {a.level, a.scale * b.scale};
          break;
        }
        case OpKind::kRescale:
          if (a.level < 2) {
            throw DepthError(where(op) + " rescales at the bottom level");
          }
          out = {a.level - 1,
                 a.scale / static_cast<double>(params->prime(a.level - 1))};
          break;
        case OpKind::kModSwitch:
          if (op.level < 1 || op.level > a.level) {
            throw ValidationError(where(op) + " switches to an invalid level");
          }
          out = {op.level, a.scale};
          break;
      }
      if (out.level != op.level || !close(out.scale, op.scale)) {
        throw ValidationError(where(op) + " annotation (L" + std::to_string(op.level) +
                              ") disagrees with the level algebra (L" +
                              std::to_string(out.level) + ")");
      }
      info[op.dst] = out;
    }
  }
  for (ValueId v : circuit.outputs) {
    if (v >= circuit.value_count || !defined[v]) {
      throw ValidationError("output v" + std::to_string(v) + " is never defined");
    }
  }
  if (params != nullptr && circuit.rescale_mode == RescaleMode::kEager &&
      circuit.depth > static_cast<int>(params->max_level()) - 1) {
    throw DepthError("circuit depth " + std::to_string(circuit.depth) +
                     " exceeds the " + std::to_string(params->max_level()) +
                     "-limb modulus chain");
  }
}

std::string dump_circuit(const CompiledCircuit& circuit) {
  std::ostringstream out;
  out << "# " << circuit.model_name << " inputs=" << circuit.input_count
      << " groups=" << circuit.groups.size() << " depth=" << circuit.depth
      << " fused=" << (circuit.fused ? "yes" : "no")
      << " rescale=" << to_string(circuit.rescale_mode) << '\n';
  for (const auto& group : circuit.groups) {
    out << "# group " << group.label << " layer=" << group.layer << '\n';
    for (const Op& op : group.ops) {
      out << 'L' << op.level << ' ' << to_string(op.kind) << " v" << op.dst;
      for (size_t s = 0; s < op.src_count(); ++s) out << " v" << op.src[s];
      if (op.kind == OpKind::kMulPlain || op.kind == OpKind::kAddPlain) {
        out << " c=" << op.constant;
      }
      out << " scale=2^" << (op.scale > 0 ? std::log2(op.scale) : 0.0) << '\n';
    }
  }
  out << "# outputs";
  for (ValueId v : circuit.outputs) out << " v" << v;
  out << '\n';
  return out.str();
}

}  // namespace hewflow::compiler
