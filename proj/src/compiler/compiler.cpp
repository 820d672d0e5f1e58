// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/compiler/compiler.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "hewflow/common/error.h"
#include "hewflow/compiler/activation.h"
#include "hewflow/compiler/packing.h"

namespace hewflow::compiler {

DenseLayer lower_conv_to_dense(const Conv2DLayer& conv) {
  const size_t oh = conv.out_h(), ow = conv.out_w();
  if (conv.out_channels() == 0 || oh == 0 || ow == 0) {
    throw ValidationError("convolution shape is empty or kernel too large");
  }
  if (!conv.bias.empty() && conv.bias.size() != conv.out_channels()) {
    throw ValidationError("conv bias must have one entry per output channel");
  }
  DenseLayer dense;
  dense.weights.assign(conv.out_dim(), std::vector<double>(conv.in_dim(), 0.0));
  dense.bias.assign(conv.out_dim(), 0.0);
  for (size_t oc = 0; oc < conv.out_channels(); ++oc) {
    if (conv.kernels[oc].size() != conv.in_channels) {
      throw ValidationError("kernel input channels mismatch");
    }
    for (size_t oy = 0; oy < oh; ++oy) {
      for (size_t ox = 0; ox < ow; ++ox) {
        const size_t row = (oc * oh + oy) * ow + ox;
        for (size_t ic = 0; ic < conv.in_channels; ++ic) {
          for (size_t ky = 0; ky < conv.kernel_h(); ++ky) {
            for (size_t kx = 0; kx < conv.kernel_w(); ++kx) {
              const size_t iy = oy * conv.stride + ky;
              const size_t ix = ox * conv.stride + kx;
              dense.weights[row][(ic * conv.height + iy) * conv.width + ix] =
                  conv.kernels[oc][ic][ky][kx];
            }
          }
        }
        if (!conv.bias.empty()) dense.bias[row] = conv.bias[oc];
      }
    }
  }
  return dense;
}

namespace {

class Emitter {
 public:
  explicit Emitter(CompiledCircuit& circuit) : circuit_(circuit) {}

  ValueId emit(TaskGroup& group, OpKind kind, ValueId a, ValueId b = kNoValue,
               double constant = 0.0, std::optional<ValueId> align = std::nullopt) {
    Op op;
    op.kind = kind;
    op.dst = circuit_.value_count++;
    op.src = {a, b};
    op.constant = constant;
    op.align_to = align;
    op.layer = group.layer;
    group.ops.push_back(op);
    return op.dst;
  }

  std::vector<ValueId> dense(const DenseLayer& layer, const std::vector<ValueId>& x,
                             int index, int unit) {
    TaskGroup matmul{"L" + std::to_string(index) + ".matmul", GroupRole::kMatmul,
                     index, unit, {}};
    TaskGroup bias{"L" + std::to_string(index) + ".bias", GroupRole::kBias, index,
                   unit, {}};
    std::vector<ValueId> y(layer.out_dim());
    for (size_t r = 0; r < layer.out_dim(); ++r) {
      std::vector<size_t> cols;
      for (size_t c = 0; c < layer.in_dim(); ++c) {
        if (layer.weights[r][c] != 0.0) cols.push_back(c);
      }
      if (cols.empty()) cols.push_back(0);
      ValueId acc = kNoValue;
      for (size_t c : cols) {
        const ValueId t =
            emit(matmul, OpKind::kMulPlain, x[c], kNoValue, layer.weights[r][c]);
        acc = acc == kNoValue ? t : emit(matmul, OpKind::kAddCt, acc, t);
      }
      y[r] = emit(bias, OpKind::kAddPlain, acc, kNoValue, layer.bias[r]);
    }
    circuit_.groups.push_back(std::move(matmul));
    circuit_.groups.push_back(std::move(bias));
    return y;
  }

  std::vector<ValueId> activation(const ActivationLayer& layer,
                                  const std::vector<ValueId>& x, int index,
                                  int unit) {
    TaskGroup group{"L" + std::to_string(index) + ".activation",
                    GroupRole::kActivation, index, unit, {}};
    const ActivationPolynomial p = polynomial_for(layer);
    std::vector<ValueId> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      const ValueId z = x[i];
      if (layer.kind == ActivationKind::kSquare) {
        y[i] = emit(group, OpKind::kMulCt, z, z);
        continue;
      }
      if (layer.kind == ActivationKind::kCubic) {
        const ValueId z2 = emit(group, OpKind::kMulCt, z, z);
        y[i] = emit(group, OpKind::kMulCt, z2, z);
        continue;
      }
      const auto& c = p.coeffs;
      ValueId s = kNoValue;
      if (p.degree() == 1) {
        s = emit(group, OpKind::kMulPlain, z, kNoValue, c[1]);
      } else if (p.degree() == 2) {
        const ValueId z2 = emit(group, OpKind::kMulCt, z, z);
        const ValueId t2 = emit(group, OpKind::kMulPlain, z2, kNoValue, c[2]);
        const ValueId t1 = emit(group, OpKind::kMulPlain, z, kNoValue, c[1], t2);
        s = emit(group, OpKind::kAddCt, t2, t1);
      } else {
        const ValueId z2 = emit(group, OpKind::kMulCt, z, z);
        const ValueId t3 = emit(group, OpKind::kMulPlain, z, kNoValue, c[3]);
        const ValueId u3 = emit(group, OpKind::kMulCt, t3, z2);
        const ValueId t2 = emit(group, OpKind::kMulPlain, z2, kNoValue, c[2], u3);
        s = emit(group, OpKind::kAddCt, u3, t2);
        const ValueId t1 = emit(group, OpKind::kMulPlain, z, kNoValue, c[1], u3);
        s = emit(group, OpKind::kAddCt, s, t1);
      }
      y[i] = emit(group, OpKind::kAddPlain, s, kNoValue, c[0]);
    }
    circuit_.groups.push_back(std::move(group));
    return y;
  }

 private:
  CompiledCircuit& circuit_;
};

bool is_dense_like(const Layer& layer) {
  return std::holds_alternative<DenseLayer>(layer) ||
         std::holds_alternative<Conv2DLayer>(layer);
}

}  // namespace

CompiledCircuit emit_circuit(const ModelGraph& model) {
  model.validate();
  CompiledCircuit circuit;
  circuit.model_name = model.name;
  circuit.input_count = model.input_width();
  circuit.value_count = static_cast<ValueId>(circuit.input_count);
  Emitter emitter(circuit);
  std::vector<ValueId> x(circuit.input_count);
  for (size_t i = 0; i < x.size(); ++i) x[i] = static_cast<ValueId>(i);

  int unit = 0;
  bool unit_open_for_activation = false;
  for (size_t i = 0; i < model.layers.size(); ++i) {
    const Layer& layer = model.layers[i];
    const int index = static_cast<int>(i + 1);
    if (is_dense_like(layer)) {
      ++unit;
      if (const auto* d = std::get_if<DenseLayer>(&layer)) {
        x = emitter.dense(*d, x, index, unit);
      } else {
        x = emitter.dense(lower_conv_to_dense(std::get<Conv2DLayer>(layer)), x,
                          index, unit);
      }
      unit_open_for_activation = true;
    } else if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
      if (!unit_open_for_activation) ++unit;
      x = emitter.activation(*a, x, index, unit);
      unit_open_for_activation = false;
    }
  }
  circuit.outputs = x;
  circuit.depth = compute_depth(circuit);
  circuit.modulus_depth = circuit.depth;
  return circuit;
}

CompiledCircuit fuse_operators(const CompiledCircuit& circuit) {
  if (circuit.fused) return circuit;
  if (circuit.planned) {
    throw ValidationError("operator fusion must run before level planning");
  }
  CompiledCircuit out = circuit;
  out.groups.clear();
  out.fused = true;
  int next_composite = 0;
  for (size_t i = 0; i < circuit.groups.size();) {
    size_t j = i;
    while (j < circuit.groups.size() && circuit.groups[j].unit == circuit.groups[i].unit) {
      ++j;
    }
    TaskGroup merged;
    merged.role = GroupRole::kFused;
    merged.layer = circuit.groups[i].layer;
    merged.unit = circuit.groups[i].unit;
    const TaskGroup* matmul = nullptr;
    const TaskGroup* bias = nullptr;
    for (size_t g = i; g < j; ++g) {
      const TaskGroup& group = circuit.groups[g];
      merged.label += (merged.label.empty() ? "" : "+") + group.label;
      if (group.role == GroupRole::kMatmul) matmul = &group;
      if (group.role == GroupRole::kBias) bias = &group;
    }
    if (matmul != nullptr) {
      std::unordered_map<ValueId, const Op*> bias_of;
      if (bias != nullptr) {
        for (const Op& op : bias->ops) bias_of[op.src[0]] = &op;
      }
      std::vector<Op> block;
      auto flush = [&] {
        if (block.empty()) return;
        for (Op& op : block) {
          op.composite = next_composite;
          merged.ops.push_back(op);
        }
        ++next_composite;
        block.clear();
      };
      for (const Op& op : matmul->ops) {
        block.push_back(op);
        auto it = bias_of.find(op.dst);
        if (it != bias_of.end()) {
          block.push_back(*it->second);
          flush();
        }
      }
      flush();
    }
    for (size_t g = i; g < j; ++g) {
      const TaskGroup& group = circuit.groups[g];
      if (group.role == GroupRole::kMatmul || group.role == GroupRole::kBias) continue;
      merged.ops.insert(merged.ops.end(), group.ops.begin(), group.ops.end());
    }
    out.groups.push_back(std::move(merged));
    i = j;
  }
  return out;
}

std::vector<int> value_depths(const CompiledCircuit& circuit) {
  std::vector<int> depth(circuit.value_count, 0);
  for (const auto& group : circuit.groups) {
    for (const Op& op : group.ops) {
      const int a = depth[op.src[0]];
      const int b = op.src_count() == 2 ? depth[op.src[1]] : 0;
      switch (op.kind) {
        case OpKind::kMulPlain:
          depth[op.dst] = op.align_to ? depth[*op.align_to] : a + 1;
          break;
        case OpKind::kMulCt:
          depth[op.dst] = std::max(a, b) + 1;
          break;
        case OpKind::kAddCt:
          depth[op.dst] = std::max(a, b);
          break;
        default:
          depth[op.dst] = a;
          break;
      }
    }
  }
  return depth;
}

int compute_depth(const CompiledCircuit& circuit) {
  const auto depth = value_depths(circuit);
  int d = 0;
  for (size_t v = circuit.input_count; v < depth.size(); ++v) d = std::max(d, depth[v]);
  return d;
}

namespace {

struct Planned {
  ValueId id = kNoValue;
  size_t level = 0;
  double scale = 0.0;
};

bool is_additive(OpKind kind) {
  return kind == OpKind::kAddCt || kind == OpKind::kAddPlain;
}

/// Product-class values carry a weight factor that the next rescale
/// removes. Chains of additions over them share a single rescale.
std::vector<bool> rescale_after(const CompiledCircuit& circuit) {
  const size_t count = circuit.value_count;
  std::vector<bool> product(count, false), always(count, false), output(count, false);
  std::vector<int> uses(count, 0);
  std::vector<const Op*> consumer(count, nullptr);
  for (ValueId v : circuit.outputs) output[v] = true;
  for (const auto& group : circuit.groups) {
    for (const Op& op : group.ops) {
      for (size_t s = 0; s < op.src_count(); ++s) {
        if (s == 1 && op.src[1] == op.src[0]) continue;
        ++uses[op.src[s]];
        consumer[op.src[s]] = &op;
      }
      switch (op.kind) {
        case OpKind::kMulPlain:
          product[op.dst] = !op.align_to;
          always[op.dst] = op.align_to.has_value();
          break;
        case OpKind::kMulCt:
          always[op.dst] = true;
          break;
        case OpKind::kAddCt:
          product[op.dst] = product[op.src[0]] && product[op.src[1]];
          break;
        case OpKind::kAddPlain:
          product[op.dst] = product[op.src[0]];
          break;
        default:
          break;
      }
    }
  }
  std::vector<bool> rescale(count, false);
  for (size_t v = 0; v < count; ++v) {
    if (always[v]) {
      rescale[v] = true;
    } else if (product[v]) {
      const bool folds = uses[v] == 1 && !output[v] && is_additive(consumer[v]->kind) &&
                         product[consumer[v]->dst];
      rescale[v] = !folds;
    }
  }
  return rescale;
}

void check_depth(const CompiledCircuit& circuit, size_t limbs) {
  const auto depth = value_depths(circuit);
  const int budget = static_cast<int>(limbs) - 1;
  for (const auto& group : circuit.groups) {
    for (const Op& op : group.ops) {
      if (depth[op.dst] > budget) {
        throw DepthError("layer " + std::to_string(op.layer) +
                         " needs multiplicative depth " + std::to_string(depth[op.dst]) +
                         " but " + std::to_string(limbs) + " limbs allow " +
                         std::to_string(budget));
      }
    }
  }
}

}  // namespace

CompiledCircuit plan_levels(const CompiledCircuit& circuit,
                            const ckks::SchemeParams& params, RescaleMode mode) {
  if (circuit.planned) {
    throw ValidationError("circuit is already level-planned");
  }
  validate_circuit(circuit);
  const bool eager = mode == RescaleMode::kEager;
  const size_t top = params.max_level();
  const int depth = compute_depth(circuit);
  if (eager) check_depth(circuit, top);
  const size_t entry = eager ? static_cast<size_t>(depth) + 1 : top;
  const double budget_bits = params.log2_modulus(top) - kOffModeHeadroomBits;
  const auto rescale = rescale_after(circuit);

  CompiledCircuit out = circuit;
  out.groups.clear();
  out.planned = true;
  out.rescale_mode = mode;
  out.input_level = top;
  out.input_scale = params.scale;
  out.entry_level = entry;
  out.depth = depth;
  out.modulus_depth = depth;
  out.params_hash = params.hash;
  out.value_count = static_cast<ValueId>(circuit.input_count);

  std::vector<Planned> cur(circuit.value_count), pre(circuit.value_count);
  for (size_t i = 0; i < circuit.input_count; ++i) {
    cur[i] = pre[i] = {static_cast<ValueId>(i), top, params.scale};
  }
  std::map<std::pair<ValueId, size_t>, ValueId> switched;

  for (const auto& group : circuit.groups) {
    TaskGroup g = group;
    g.ops.clear();
    int open = -1;
    size_t composite_start = 0;
    for (const Op& op : group.ops) {
      if (op.composite != open) {
        open = op.composite;
        composite_start = g.ops.size();
      }
      auto place_before = [&](const Op& pre_op) {
        if (open >= 0) {
          g.ops.insert(g.ops.begin() + static_cast<std::ptrdiff_t>(composite_start),
                       pre_op);
          ++composite_start;
        } else {
          g.ops.push_back(pre_op);
        }
      };
      auto to_level = [&](const Planned& v, size_t level) -> Planned {
        if (v.level == level) return v;
        if (v.level < level) {
          throw std::logic_error("operand below required level");
        }
        const auto key = std::pair{v.id, level};
        auto it = switched.find(key);
        if (it == switched.end()) {
          Op ms;
          ms.kind = OpKind::kModSwitch;
          ms.dst = out.value_count++;
          ms.src = {v.id, kNoValue};
          ms.level = level;
          ms.scale = v.scale;
          ms.layer = op.layer;
          place_before(ms);
          it = switched.emplace(key, ms.dst).first;
        }
        return {it->second, level, v.scale};
      };
      auto operand = [&](ValueId v) {
        Planned p = cur[v];
        if (v < circuit.input_count && p.level > entry) p = to_level(p, entry);
        return p;
      };

      Op n = op;
      Planned a = operand(op.src[0]);
      Planned result;
      switch (op.kind) {
        case OpKind::kMulPlain:
          if (op.align_to) {
            const Planned target = pre[*op.align_to];
            a = to_level(a, target.level);
            n.constant_scale = target.scale / a.scale;
            n.align_to = target.id;
          } else {
            n.constant_scale =
                eager ? static_cast<double>(params.prime(a.level - 1)) : params.scale;
          }
          result = {kNoValue, a.level, a.scale * n.constant_scale};
          break;
        case OpKind::kAddCt:
        case OpKind::kMulCt: {
          Planned b = operand(op.src[1]);
          const size_t level = std::min(a.level, b.level);
          a = to_level(a, level);
          b = to_level(b, level);
          n.src[1] = b.id;
          result = {kNoValue, level,
                    op.kind == OpKind::kMulCt ? a.scale * b.scale : a.scale};
          break;
        }
        case OpKind::kAddPlain:
          result = {kNoValue, a.level, a.scale};
          break;
        case OpKind::kRescale:
        case OpKind::kModSwitch:
          throw ValidationError("unplanned circuit already contains level ops");
      }
      n.src[0] = a.id;
      n.dst = out.value_count++;
      n.level = result.level;
      n.scale = result.scale;
      result.id = n.dst;
      if (!eager && std::log2(result.scale) >= budget_bits) {
        throw DepthError("layer " + std::to_string(op.layer) + " reaches scale 2^" +
                         std::to_string(static_cast<int>(std::log2(result.scale))) +
                         " without rescaling; the " + std::to_string(top) +
                         "-limb modulus holds about 2^" +
                         std::to_string(static_cast<int>(budget_bits)));
      }
      g.ops.push_back(n);
      pre[op.dst] = result;
      cur[op.dst] = result;
      if (eager && rescale[op.dst]) {
        Op r;
        r.kind = OpKind::kRescale;
        r.dst = out.value_count++;
        r.src = {n.dst, kNoValue};
        r.level = result.level - 1;
        r.scale = result.scale / static_cast<double>(params.prime(result.level - 1));
        r.layer = op.layer;
        g.ops.push_back(r);
        cur[op.dst] = {r.dst, r.level, r.scale};
      }
    }
    out.groups.push_back(std::move(g));
  }
  for (ValueId& v : out.outputs) v = cur[v].id;
  return out;
}

CompiledCircuit compile(const ModelGraph& model, const ckks::SchemeParams& params,
                        size_t batch_size, const CompileOptions& options) {
  PackingPlan packing = plan_packing(model, batch_size, params.slot_count());
  CompiledCircuit circuit = emit_circuit(model);
  if (options.fuse) circuit = fuse_operators(circuit);
  circuit = plan_levels(circuit, params, options.rescale);
  circuit.packing = std::move(packing);
  validate_circuit(circuit, &params);
  return circuit;
}

}  // namespace hewflow::compiler
