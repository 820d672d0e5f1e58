// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>

#include "hewflow/common/error.h"
#include "hewflow/sim/sim.h"

namespace hewflow::sim {

LinearCalibration calibrate(const std::vector<ObservedRow>& rows) {
  std::set<size_t> distinct;
  for (const auto& row : rows) {
    if (row.pods == 0) throw ValidationError("calibration row has zero pods");
    if (!(row.latency_ms > 0.0)) throw ValidationError("calibration latency must be positive");
    distinct.insert(row.pods);
  }
  if (distinct.size() < 2) {
    throw ValidationError("calibration needs rows with at least two distinct pod counts");
  }
  // Ordinary least squares of latency on x = 1 / pods.
  const double n = static_cast<double>(rows.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& row : rows) {
    sx += 1.0 / static_cast<double>(row.pods);
    sy += row.latency_ms;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& row : rows) {
    const double dx = 1.0 / static_cast<double>(row.pods) - mx;
    sxx += dx * dx;
    sxy += dx * (row.latency_ms - my);
  }
  LinearCalibration fit;
  fit.request_cost_ms = sxy / sxx;
  fit.overhead_ms = my - fit.request_cost_ms * mx;
  for (const auto& row : rows) {
    fit.relative_residuals.push_back((fit.predict(row.pods) - row.latency_ms) / row.latency_ms);
  }
  return fit;
}

namespace {

SimMetrics sweep_point(const SweepSpec& spec, const SweepPoint& point,
                       double service_s, uint64_t seed) {
  ClusterConfig cluster;
  cluster.min_pods = cluster.max_pods = cluster.initial_pods = point.pods;
  cluster.hpa_enabled = false;
  cluster.templates = {spec.pod};
  cluster.hpa_interval_s = std::max(service_s, 1e-9) * 1000.0;

  WorkloadSpec workload;
  workload.kind = WorkloadKind::kPoisson;
  workload.rate = point.utilization * static_cast<double>(point.pods) / service_s;
  workload.horizon_s = spec.horizon_s > 0.0 ? spec.horizon_s : spec.horizon_services * service_s;
  CircuitProfile task = spec.task;
  task.cost = service_s * spec.pod.speed();
  task.weight = 1.0;
  workload.mix = {task};

  SimOptions options;
  options.warmup_s = spec.warmup_fraction * workload.horizon_s;
  return run_sim(cluster, workload, seed, options);
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, uint64_t seed) {
  if (spec.points.empty()) throw ValidationError("sweep has no points");
  if (spec.calibrate_on.pods == 0 || !(spec.calibrate_on.latency_ms > 0.0) ||
      !(spec.calibrate_on.utilization > 0.0 && spec.calibrate_on.utilization < 1.0)) {
    throw ValidationError("sweep calibration row needs pods, latency and utilization in (0, 1)");
  }
  for (const auto& p : spec.points) {
    if (p.pods == 0 || !(p.utilization > 0.0 && p.utilization < 1.0)) {
      throw ValidationError("sweep points need pods >= 1 and utilization in (0, 1)");
    }
  }
  spec.pod.validate("sweep.pod");
  // Mean latency is linear in the service time for a fixed utilization, so
  // one unit-time run fixes the service time that reproduces the row.
  const SweepPoint anchor{spec.calibrate_on.pods, spec.calibrate_on.utilization};
  const double unit_ms = sweep_point(spec, anchor, 1.0, seed).mean_latency_ms;
  SweepResult result;
  result.service_time_s = spec.calibrate_on.latency_ms / unit_ms;
  for (const auto& p : spec.points) {
    result.rows.push_back({p.pods, p.utilization,
                           sweep_point(spec, p, result.service_time_s, seed)});
  }
  return result;
}

std::string sweep_markdown(const SweepResult& result) {
  std::ostringstream out;
  out << std::fixed;
  out << "| Cluster(Pods) | CPU Usage (%) | Memory (MB) | Latency (ms) |\n";
  out << "|---|---|---|---|\n";
  for (const auto& row : result.rows) {
    out << "| " << row.pods << " | " << std::setprecision(1)
        << row.metrics.mean_utilization * 100.0 << " | " << std::setprecision(0)
        << row.metrics.memory_per_pod_mb << " | " << std::setprecision(1)
        << row.metrics.mean_latency_ms << " |\n";
  }
  return out.str();
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "pods,latency_ms,p95_latency_ms,utilization,memory_mb\n";
  for (const auto& row : result.rows) {
    out << row.pods << ',' << row.metrics.mean_latency_ms << ','
        << row.metrics.p95_latency_ms << ',' << row.metrics.mean_utilization << ','
        << row.metrics.memory_per_pod_mb << '\n';
  }
  return out.str();
}

}  // namespace hewflow::sim
