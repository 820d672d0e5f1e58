// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hewflow/ckks/ciphertext.h"
#include "hewflow/ckks/evaluator.h"
#include "hewflow/ckks/keys.h"
#include "hewflow/compiler/circuit.h"

namespace hewflow::engine {

/// B x d, one row per sample.
using Samples = std::vector<std::vector<double>>;

/// Ciphertext j carries feature (or output) j of every sample.
struct EncryptedBatch {
  std::vector<ckks::Ciphertext> cts;
  size_t batch_size = 0;
};

struct ExecutionMetrics {
  /// Wall time per op in circuit order. A fused composite is one kernel;
  /// its time is booked on the composite's last op.
  std::vector<uint64_t> op_ns;
  std::vector<uint64_t> group_ns;
  std::array<size_t, compiler::kOpKindCount> op_counts{};
  size_t dispatches = 0;
  /// Serialized bytes of every ciphertext produced.
  uint64_t bytes_processed = 0;
  uint64_t peak_live_bytes = 0;
  /// Mean size of the live ciphertexts after each op, averaged over the
  /// op trace.
  double avg_live_ciphertext_bytes = 0.0;
  /// Mean size of every ciphertext in the trace, inputs included.
  double avg_ciphertext_bytes = 0.0;
  /// Live bytes averaged over the op trace.
  double avg_live_bytes = 0.0;
  double e2e_ms = 0.0;

  uint64_t total_op_ns() const;
};

struct ExecutionResult {
  EncryptedBatch outputs;
  ExecutionMetrics metrics;
};

/// Packs column j of `samples` into the slots of ciphertext j at the top
/// level and scale Delta. Throws ValidationError on shape errors.
EncryptedBatch encrypt_batch(const Samples& samples, size_t feature_count,
                             const ckks::PublicKey& pk,
                             const ckks::SchemeParams& params, uint64_t seed);

/// Slots 0..B-1 of every ciphertext, returned one row per sample.
Samples decrypt_batch(const EncryptedBatch& batch, const ckks::SecretKey& sk,
                      const ckks::SchemeParams& params);

/// Read-only execution context; execute() may be called from several
/// threads at once.
class Engine {
 public:
  Engine(ckks::SchemeParams params, const ckks::RelinKey* relin_key);

  const ckks::SchemeParams& params() const { return evaluator_.params(); }

  /// Throws ParamsError when the batch or keys do not match the circuit.
  ExecutionResult execute(const compiler::CompiledCircuit& circuit,
                          const EncryptedBatch& batch) const;

 private:
  ckks::Evaluator evaluator_;
  bool has_relin_;
};

/// Interprets the circuit over real vectors, one row per sample.
Samples execute_plain(const compiler::CompiledCircuit& circuit, const Samples& samples);

struct DeviationReport {
  double max_abs_error = 0.0;
  double mean_abs_error = 0.0;
  /// max - min of the reference scores.
  double score_range = 0.0;
  double mean_error_over_range = 0.0;
  double agreement = 1.0;
  size_t samples = 0;
};

/// Single-output rows are classified by `threshold`; wider rows by argmax.
DeviationReport compare_outputs(const Samples& actual, const Samples& expected,
                                double threshold = 0.5);

std::vector<int> classify(const Samples& scores, double threshold = 0.5);

}  // namespace hewflow::engine
