// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/engine/engine.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "hewflow/ckks/encoder.h"
#include "hewflow/ckks/encryptor.h"
#include "hewflow/common/error.h"
#include "hewflow/common/random.h"

namespace hewflow::engine {

using compiler::CompiledCircuit;
using compiler::Op;
using compiler::OpKind;
using compiler::ValueId;
using Clock = std::chrono::steady_clock;

uint64_t ExecutionMetrics::total_op_ns() const {
  return std::accumulate(op_ns.begin(), op_ns.end(), uint64_t{0});
}

EncryptedBatch encrypt_batch(const Samples& samples, size_t feature_count,
                             const ckks::PublicKey& pk,
                             const ckks::SchemeParams& params, uint64_t seed) {
  ckks::require_params(params, pk.params_hash, "public key");
  if (samples.size() > params.slot_count()) {
    throw ValidationError("batch of " + std::to_string(samples.size()) +
                          " samples exceeds " + std::to_string(params.slot_count()) +
                          " slots");
  }
  for (size_t r = 0; r < samples.size(); ++r) {
    if (samples[r].size() != feature_count) {
      throw ValidationError("sample " + std::to_string(r) + " has " +
                            std::to_string(samples[r].size()) + " features, expected " +
                            std::to_string(feature_count));
    }
  }
  const ckks::Encoder encoder(params);
  EncryptedBatch batch;
  batch.batch_size = samples.size();
  std::vector<double> column(samples.size());
  for (size_t j = 0; j < feature_count; ++j) {
    for (size_t r = 0; r < samples.size(); ++r) column[r] = samples[r][j];
    const auto pt = encoder.encode(column, params.scale);
    batch.cts.push_back(ckks::encrypt(params, pk, pt, derive_seed(seed, j)));
  }
  return batch;
}

Samples decrypt_batch(const EncryptedBatch& batch, const ckks::SecretKey& sk,
                      const ckks::SchemeParams& params) {
  const ckks::Encoder encoder(params);
  Samples rows(batch.batch_size, std::vector<double>(batch.cts.size()));
  for (size_t j = 0; j < batch.cts.size(); ++j) {
    const auto slots = encoder.decode(ckks::decrypt(params, sk, batch.cts[j]));
    for (size_t r = 0; r < batch.batch_size; ++r) rows[r][j] = slots[r];
  }
  return rows;
}

Engine::Engine(ckks::SchemeParams params, const ckks::RelinKey* relin_key)
    : evaluator_(std::move(params), relin_key), has_relin_(relin_key != nullptr) {}

namespace {

void check_batch(const CompiledCircuit& circuit, const EncryptedBatch& batch,
                 const ckks::SchemeParams& params, bool has_relin) {
  if (!circuit.planned) {
    throw ValidationError("circuit has not been level-planned");
  }
  if (circuit.params_hash != params.hash) {
    throw ParamsError("circuit was compiled for different scheme params");
  }
  if (batch.cts.size() != circuit.input_count) {
    throw ValidationError("batch has " + std::to_string(batch.cts.size()) +
                          " ciphertexts, circuit expects " +
                          std::to_string(circuit.input_count));
  }
  for (const auto& ct : batch.cts) {
    ckks::require_params(params, ct.params_hash, "input ciphertext");
    if (ct.level() != circuit.input_level ||
        std::fabs(ct.scale - circuit.input_scale) >
            ckks::kScaleTolerance * circuit.input_scale) {
      throw ParamsError("input ciphertext at level " + std::to_string(ct.level()) +
                        " does not match the circuit entry level " +
                        std::to_string(circuit.input_level));
    }
  }
  if (!has_relin) {
    for (const Op* op : circuit.ops()) {
      if (op->kind == OpKind::kMulCt) {
        throw ParamsError("circuit multiplies ciphertexts but no relinearization key was given");
      }
    }
  }
}

void check_annotation(const Op& op, const ckks::Ciphertext& ct) {
  if (ct.level() != op.level ||
      std::fabs(ct.scale - op.scale) > ckks::kScaleTolerance * op.scale) {
    throw std::logic_error("result of " + compiler::to_string(op.kind) + " v" +
                           std::to_string(op.dst) + " left its planned level/scale");
  }
}

}  // namespace

ExecutionResult Engine::execute(const CompiledCircuit& circuit,
                                const EncryptedBatch& batch) const {
  const auto& params = evaluator_.params();
  check_batch(circuit, batch, params, has_relin_);
  const auto start = Clock::now();
  const auto ops = circuit.ops();

  // Positions after which a value is dead.
  std::vector<std::vector<ValueId>> free_at(ops.size());
  {
    std::vector<size_t> last(circuit.value_count, SIZE_MAX);
    for (size_t p = 0; p < ops.size(); ++p) {
      for (size_t s = 0; s < ops[p]->src_count(); ++s) last[ops[p]->src[s]] = p;
    }
    for (ValueId v : circuit.outputs) last[v] = SIZE_MAX;
    for (ValueId v = 0; v < circuit.value_count; ++v) {
      if (last[v] != SIZE_MAX) free_at[last[v]].push_back(v);
    }
  }

  std::vector<std::optional<ckks::Ciphertext>> owned(circuit.value_count);
  std::vector<uint64_t> bytes(circuit.value_count, 0);
  std::vector<bool> live(circuit.value_count, false);
  auto get = [&](ValueId v) -> const ckks::Ciphertext& {
    if (v < circuit.input_count) return batch.cts[v];
    if (!owned[v]) throw std::logic_error("value v" + std::to_string(v) + " is not live");
    return *owned[v];
  };

  ExecutionMetrics m;
  m.op_ns.assign(ops.size(), 0);
  uint64_t live_bytes = 0;
  size_t live_count = 0;
  for (size_t i = 0; i < circuit.input_count; ++i) {
    bytes[i] = ckks::ct_size_bytes(batch.cts[i]);
    live[i] = true;
    live_bytes += bytes[i];
    ++live_count;
  }
  m.peak_live_bytes = live_bytes;
  double trace_bytes = 0.0, trace_mean = 0.0, trace_steps = 0.0;
  double made_bytes = 0.0, made_count = static_cast<double>(circuit.input_count);
  for (size_t i = 0; i < circuit.input_count; ++i) made_bytes += bytes[i];

  auto store = [&](ValueId v, ckks::Ciphertext ct) {
    bytes[v] = ckks::ct_size_bytes(ct);
    owned[v] = std::move(ct);
    live[v] = true;
    live_bytes += bytes[v];
    ++live_count;
    m.bytes_processed += bytes[v];
    m.peak_live_bytes = std::max(m.peak_live_bytes, live_bytes);
  };
  auto release = [&](size_t p) {
    for (ValueId v : free_at[p]) {
      if (!live[v]) continue;
      live[v] = false;
      live_bytes -= bytes[v];
      --live_count;
      if (v >= circuit.input_count) owned[v].reset();
    }
  };
  auto sample = [&](size_t weight) {
    trace_bytes += static_cast<double>(live_bytes) * weight;
    if (live_count > 0) {
      trace_mean += static_cast<double>(live_bytes) / live_count * weight;
    }
    trace_steps += static_cast<double>(weight);
  };

  size_t p = 0;
  for (const auto& group : circuit.groups) {
    const auto group_start = Clock::now();
    ++m.dispatches;
    for (size_t i = 0; i < group.ops.size();) {
      const Op& op = group.ops[i];
      const auto op_start = Clock::now();
      if (op.composite >= 0) {
        size_t j = i;
        while (j < group.ops.size() && group.ops[j].composite == op.composite) ++j;
        std::vector<const ckks::Ciphertext*> cts;
        std::vector<double> weights;
        std::optional<double> bias;
        double weight_scale = 0.0;
        for (size_t k = i; k < j; ++k) {
          const Op& c = group.ops[k];
          ++m.op_counts[static_cast<size_t>(c.kind)];
          if (c.kind == OpKind::kMulPlain) {
            cts.push_back(&get(c.src[0]));
            weights.push_back(c.constant);
            weight_scale = c.constant_scale;
          } else if (c.kind == OpKind::kAddPlain) {
            if (k + 1 != j) throw std::logic_error("composite bias must come last");
            bias = c.constant;
          } else if (c.kind != OpKind::kAddCt) {
            throw std::logic_error("unsupported op inside a composite");
          }
        }
        const Op& last = group.ops[j - 1];
        auto ct = evaluator_.multiply_accumulate_const(cts, weights, weight_scale, bias);
        check_annotation(last, ct);
        made_bytes += static_cast<double>(ckks::ct_size_bytes(ct)) * (j - i);
        made_count += static_cast<double>(j - i);
        store(last.dst, std::move(ct));
        m.op_ns[p + (j - i) - 1] = static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - op_start)
                .count());
        for (size_t k = 0; k < j - i; ++k) release(p + k);
        sample(j - i);
        p += j - i;
        i = j;
        continue;
      }
      const auto& a = get(op.src[0]);
      ckks::Ciphertext ct;
      switch (op.kind) {
        case OpKind::kMulPlain:
          ct = evaluator_.mul_const(a, op.constant, op.constant_scale);
          break;
        case OpKind::kAddCt:
          ct = evaluator_.add(a, get(op.src[1]));
          break;
        case OpKind::kAddPlain:
          ct = evaluator_.add_const(a, op.constant);
          break;
        case OpKind::kMulCt:
          ct = evaluator_.mul(a, get(op.src[1]));
          break;
        case OpKind::kRescale:
          ct = evaluator_.rescale(a);
          break;
        case OpKind::kModSwitch:
          ct = evaluator_.mod_switch_to(a, op.level);
          break;
      }
      check_annotation(op, ct);
      made_bytes += static_cast<double>(ckks::ct_size_bytes(ct));
      made_count += 1.0;
      store(op.dst, std::move(ct));
      ++m.op_counts[static_cast<size_t>(op.kind)];
      m.op_ns[p] = static_cast<uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - op_start)
              .count());
      release(p);
      sample(1);
      ++p;
      ++i;
    }
    m.group_ns.push_back(static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - group_start)
            .count()));
  }

  ExecutionResult result;
  result.outputs.batch_size = batch.batch_size;
  for (ValueId v : circuit.outputs) result.outputs.cts.push_back(get(v));
  m.avg_live_bytes = trace_steps > 0 ? trace_bytes / trace_steps : live_bytes;
  m.avg_live_ciphertext_bytes =
      trace_steps > 0 ? trace_mean / trace_steps
                      : (live_count ? static_cast<double>(live_bytes) / live_count : 0.0);
  m.avg_ciphertext_bytes = made_count > 0 ? made_bytes / made_count : 0.0;
  m.e2e_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  result.metrics = std::move(m);
  return result;
}

}  // namespace hewflow::engine
