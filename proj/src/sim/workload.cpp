// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hewflow/common/error.h"
#include "hewflow/common/random.h"
#include "hewflow/sim/sim.h"
#include "internal.h"

namespace hewflow::sim {

void PodSpec::validate(const std::string& where) const {
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw ValidationError(where + ".capacity must be positive");
  }
  if (!(accel_multiplier >= 1.0) || !std::isfinite(accel_multiplier)) {
    throw ValidationError(where + ".accel_multiplier must be at least 1");
  }
  if (!(startup_delay_s >= 0.0)) {
    throw ValidationError(where + ".startup_delay_s must be non-negative");
  }
  if (!(base_memory_mb >= 0.0)) {
    throw ValidationError(where + ".base_memory_mb must be non-negative");
  }
}

std::string to_string(SchedulerPolicy policy) {
  return policy == SchedulerPolicy::kPriorityDepth ? "PRIORITY_DEPTH" : "ROUND_ROBIN";
}

SchedulerPolicy policy_from_string(const std::string& name) {
  if (name == "PRIORITY_DEPTH") return SchedulerPolicy::kPriorityDepth;
  if (name == "ROUND_ROBIN") return SchedulerPolicy::kRoundRobin;
  throw ValidationError("unknown scheduler policy '" + name + "'");
}

void ClusterConfig::validate() const {
  if (min_pods < 1) throw ValidationError("cluster.min_pods must be at least 1");
  if (min_pods > max_pods) {
    throw ValidationError("cluster.min_pods (" + std::to_string(min_pods) +
                          ") exceeds cluster.max_pods (" + std::to_string(max_pods) + ")");
  }
  if (initial_pods != 0 && (initial_pods < min_pods || initial_pods > max_pods)) {
    throw ValidationError("cluster.initial_pods must lie in [min_pods, max_pods]");
  }
  if (!(hpa_target_utilization > 0.0 && hpa_target_utilization < 1.0)) {
    throw ValidationError("cluster.hpa_target_utilization must lie in (0, 1)");
  }
  if (!(hpa_interval_s > 0.0)) {
    throw ValidationError("cluster.hpa_interval_s must be positive");
  }
  if (hpa_window < 1) throw ValidationError("cluster.hpa_window must be at least 1");
  if (templates.empty()) throw ValidationError("cluster.pod_templates must not be empty");
  for (size_t i = 0; i < templates.size(); ++i) {
    templates[i].validate("cluster.pod_templates[" + std::to_string(i) + "]");
  }
}

double circuit_cost(const OpCounts& counts, const UnitCosts& unit) {
  double cost = 0.0;
  for (size_t k = 0; k < counts.size(); ++k) cost += static_cast<double>(counts[k]) * unit[k];
  return cost;
}

void WorkloadSpec::validate() const {
  if (kind == WorkloadKind::kPoisson && !(rate > 0.0)) {
    throw ValidationError("workload.rate must be positive");
  }
  if (kind == WorkloadKind::kClosedLoop) {
    if (clients < 1) throw ValidationError("workload.clients must be at least 1");
    if (!(think_time_s >= 0.0)) {
      throw ValidationError("workload.think_time_s must be non-negative");
    }
  }
  if (!(horizon_s >= 0.0)) throw ValidationError("workload.horizon_s must be non-negative");
  if (mix.empty()) throw ValidationError("workload.mix must not be empty");
  for (size_t i = 0; i < mix.size(); ++i) {
    const std::string where = "workload.mix[" + std::to_string(i) + "]";
    if (!(mix[i].cost > 0.0)) throw ValidationError(where + ".cost must be positive");
    if (mix[i].depth < 1) throw ValidationError(where + ".depth must be at least 1");
    if (!(mix[i].weight > 0.0)) throw ValidationError(where + ".weight must be positive");
  }
}

namespace {

size_t pick_profile(const std::vector<CircuitProfile>& mix, Prng& prng) {
  if (mix.size() == 1) return 0;
  double total = 0.0;
  for (const auto& p : mix) total += p.weight;
  double u = uniform_unit(prng) * total;
  for (size_t i = 0; i < mix.size(); ++i) {
    if (u < mix[i].weight) return i;
    u -= mix[i].weight;
  }
  return mix.size() - 1;
}

}  // namespace

Task make_task(const WorkloadSpec& spec, uint64_t id, double arrival, Prng& prng) {
  Task t;
  t.id = id;
  t.arrival_s = arrival;
  t.profile = pick_profile(spec.mix, prng);
  const auto& p = spec.mix[t.profile];
  t.cost = p.cost;
  t.depth = p.depth;
  t.ciphertext_bytes = p.ciphertext_bytes;
  return t;
}

std::vector<Task> generate_workload(const WorkloadSpec& spec, uint64_t seed) {
  spec.validate();
  std::vector<Task> tasks;
  Prng arrivals(derive_seed(seed, 1));
  Prng mix(derive_seed(seed, 2));
  if (spec.kind == WorkloadKind::kPoisson) {
    double t = 0.0;
    while (true) {
      t += exponential(arrivals, 1.0 / spec.rate);
      if (t >= spec.horizon_s) break;
      tasks.push_back(make_task(spec, tasks.size(), t, mix));
    }
    return tasks;
  }
  for (size_t c = 0; c < spec.clients; ++c) {
    const double t =
        spec.think_time_s > 0.0 ? exponential(arrivals, spec.think_time_s) : 0.0;
    if (t >= spec.horizon_s) continue;
    Task task = make_task(spec, tasks.size(), t, mix);
    task.client = c;
    tasks.push_back(task);
  }
  std::stable_sort(tasks.begin(), tasks.end(),
                   [](const Task& a, const Task& b) { return a.arrival_s < b.arrival_s; });
  return tasks;
}

}  // namespace hewflow::sim
