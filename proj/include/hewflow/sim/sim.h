// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hewflow::sim {

struct PodSpec {
  /// Compute units per second.
  double capacity = 1000.0;
  /// Speed-up of nodes with vectorized arithmetic, >= 1.
  double accel_multiplier = 1.0;
  double startup_delay_s = 0.0;
  double base_memory_mb = 3000.0;

  double speed() const { return capacity * accel_multiplier; }
  /// Throws ValidationError.
  void validate(const std::string& where = "pod") const;
};

enum class SchedulerPolicy { kPriorityDepth, kRoundRobin };

std::string to_string(SchedulerPolicy policy);
SchedulerPolicy policy_from_string(const std::string& name);

struct ClusterConfig {
  size_t min_pods = 1;
  size_t max_pods = 1;
  /// Pods at t = 0; 0 means min_pods.
  size_t initial_pods = 0;
  double hpa_target_utilization = 0.70;
  double hpa_interval_s = 15.0;
  /// Number of evaluation intervals averaged by the autoscaler.
  size_t hpa_window = 1;
  bool hpa_enabled = true;
  /// Pod i is built from templates[i % templates.size()].
  std::vector<PodSpec> templates{PodSpec{}};
  SchedulerPolicy policy = SchedulerPolicy::kPriorityDepth;
  /// Tasks at or above this modulus depth are routed to the fastest pod.
  int depth_threshold = 3;

  void validate() const;
};

/// Per-op unit costs in the order MUL_PLAIN, ADD_CT, ADD_PLAIN, MUL_CT,
/// RESCALE, MOD_SWITCH.
using UnitCosts = std::array<double, 6>;
using OpCounts = std::array<size_t, 6>;

double circuit_cost(const OpCounts& counts, const UnitCosts& unit);

/// One request type in the workload mix.
struct CircuitProfile {
  std::string name = "task";
  double cost = 1.0;
  int depth = 1;
  uint64_t ciphertext_bytes = 0;
  double weight = 1.0;
};

enum class WorkloadKind { kPoisson, kClosedLoop };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kPoisson;
  /// Requests per second (Poisson).
  double rate = 10.0;
  /// Closed loop: each client waits an exponential think time between a
  /// completion and its next request.
  size_t clients = 1;
  double think_time_s = 1.0;
  double horizon_s = 100.0;
  std::vector<CircuitProfile> mix{CircuitProfile{}};

  void validate() const;
};

struct Task {
  uint64_t id = 0;
  double arrival_s = 0.0;
  size_t profile = 0;
  double cost = 0.0;
  int depth = 1;
  uint64_t ciphertext_bytes = 0;
  /// Closed-loop client, or SIZE_MAX for open-loop arrivals.
  size_t client = SIZE_MAX;

  bool operator==(const Task&) const = default;
};

/// Poisson: the whole stream up to the horizon. Closed loop: the first
/// request of every client; run_sim issues the rest.
std::vector<Task> generate_workload(const WorkloadSpec& spec, uint64_t seed);

/// Scheduler-visible state of one pod.
struct PodView {
  size_t id = 0;
  double speed = 0.0;
  /// Tasks waiting plus in service.
  size_t queue_length = 0;
  bool accepting = false;
};

/// Index into `pods` of the chosen pod, or SIZE_MAX when none accepts.
/// `cursor` carries round-robin state between calls.
size_t schedule(const Task& task, const std::vector<PodView>& pods,
                SchedulerPolicy policy, int depth_threshold, size_t& cursor);

/// clamp(ceil(current * mean(window) / target), min, max). A 1e-9 slack keeps
/// utilization exactly at target a fixed point under rounding.
size_t hpa_step(const std::vector<double>& window, size_t current,
                const ClusterConfig& config);

struct SimOptions {
  double warmup_s = 0.0;
  /// Added to every request latency.
  double overhead_ms = 0.0;
};

struct SimMetrics {
  double mean_latency_ms = 0.0;
  double p50_latency_ms = 0.0;
  double p95_latency_ms = 0.0;
  double p99_latency_ms = 0.0;
  double throughput_rps = 0.0;
  double mean_utilization = 0.0;
  /// (interval end, mean busy fraction over ready pods)
  std::vector<std::pair<double, double>> utilization_timeline;
  /// (time, pod count) at every change
  std::vector<std::pair<double, size_t>> pod_timeline;
  double memory_per_pod_mb = 0.0;
  double memory_total_mb = 0.0;
  double mean_pods = 0.0;
  size_t arrived = 0;
  size_t completed = 0;
  size_t queued = 0;
  size_t in_service = 0;
  size_t dropped = 0;
  size_t min_pods_seen = 0;
  size_t max_pods_seen = 0;
  /// Completed tasks per pod id.
  std::vector<size_t> completed_per_pod;
  /// Latency of every measured completion, in completion order.
  std::vector<double> latencies_ms;
};

SimMetrics run_sim(const ClusterConfig& cluster, const WorkloadSpec& workload,
                   uint64_t seed, const SimOptions& options = {});

/// Same, on a supplied open-loop task stream.
SimMetrics run_sim(const ClusterConfig& cluster, const WorkloadSpec& workload,
                   const std::vector<Task>& tasks, uint64_t seed,
                   const SimOptions& options = {});

struct ObservedRow {
  size_t pods = 0;
  double latency_ms = 0.0;
  double utilization = 0.0;
};

struct LinearCalibration {
  /// latency ~ overhead_ms + request_cost_ms / pods
  double overhead_ms = 0.0;
  double request_cost_ms = 0.0;
  std::vector<double> relative_residuals;

  double predict(size_t pods) const { return overhead_ms + request_cost_ms / pods; }
};

/// Least squares over rows with at least two distinct pod counts; throws
/// ValidationError otherwise.
LinearCalibration calibrate(const std::vector<ObservedRow>& rows);

/// Fixed cluster of `pods` identical pods with HPA disabled, fed Poisson
/// arrivals at the rate that loads each pod to `utilization`.
struct SweepPoint {
  size_t pods = 0;
  double utilization = 0.0;
};

struct SweepSpec {
  PodSpec pod;
  CircuitProfile task;
  std::vector<SweepPoint> points;
  /// Service time in seconds is solved so this row's mean latency matches.
  ObservedRow calibrate_on;
  double horizon_s = 0.0;
  /// Horizon in units of service time when horizon_s is 0.
  double horizon_services = 40000.0;
  double warmup_fraction = 0.05;
};

struct SweepRow {
  size_t pods = 0;
  double offered_utilization = 0.0;
  SimMetrics metrics;
};

struct SweepResult {
  double service_time_s = 0.0;
  std::vector<SweepRow> rows;
};

SweepResult run_sweep(const SweepSpec& spec, uint64_t seed);

/// Markdown table with the Cluster(Pods), CPU Usage, Memory and Latency
/// columns, and the latency-vs-pods curve as CSV.
std::string sweep_markdown(const SweepResult& result);
std::string sweep_csv(const SweepResult& result);

}  // namespace hewflow::sim
