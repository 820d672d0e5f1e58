// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hewflow::bench {

/// One configuration's measurements. Latencies are wall-clock milliseconds
/// to process all `samples`, one entry per timed repetition.
struct Measurement {
  std::string label;
  std::vector<double> latency_ms;
  double median_ms = 0.0;
  double throughput_rps = 0.0;
  /// Mean live ciphertext size over the execution trace.
  double avg_ciphertext_bytes = 0.0;
  /// Task-group dispatches of one circuit execution.
  size_t dispatches = 0;
  /// Circuit executions per repetition.
  size_t executions = 0;
  size_t samples = 0;
};

struct BenchReport {
  std::string scenario;
  std::string model;
  size_t repetitions = 0;
  size_t warmups = 0;
  Measurement baseline;
  Measurement optimized;
  /// speedup, latency_reduction, size_reduction, dispatch_ratio,
  /// throughput_gain.
  std::map<std::string, double> ratios;
  /// Largest decrypted output difference between the two configurations.
  double max_output_diff = 0.0;
  std::map<std::string, std::string> machine;
};

struct BenchOptions {
  /// Empty selects the scenario's reference model.
  std::string model;
  size_t samples = 1024;
  size_t repetitions = 5;
  size_t warmups = 1;
  /// Rescaling primes above the base prime.
  size_t depth = 7;
  uint64_t seed = 1;
};

/// Scenarios: packing, fusion, modswitch, e2e. Throws ValidationError for an
/// unknown scenario or fewer than 5 repetitions.
BenchReport run_bench(const std::string& scenario, const BenchOptions& options);

const std::vector<std::string>& scenarios();

std::map<std::string, double> compute_ratios(const Measurement& baseline,
                                             const Measurement& optimized);
/// Stored ratios agree with ones recomputed from the raw measurements.
bool ratios_consistent(const BenchReport& report, double tolerance = 1e-9);

double median(std::vector<double> values);

nlohmann::json report_to_json(const BenchReport& report);
BenchReport report_from_json(const nlohmann::json& doc);
std::string report_markdown(const std::vector<BenchReport>& reports);

}  // namespace hewflow::bench
