// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "hewflow/sim/sim.h"

namespace hewflow::sim {

/// A simulation run as described by a JSON config file.
struct SimConfig {
  ClusterConfig cluster;
  WorkloadSpec workload;
  UnitCosts unit_costs{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  SimOptions options;
  uint64_t seed = 1;
  /// Present when the file asks for a fixed-cluster calibration sweep.
  std::optional<SweepSpec> sweep;
};

/// Throws ValidationError naming the offending path, e.g.
/// "cluster.min_pods (4) exceeds cluster.max_pods (2)".
SimConfig sim_config_from_json(const nlohmann::json& doc);
SimConfig load_sim_config(const std::string& path);

/// Sweep over 2/4/6/8 pods at 83.1/76.5/70.4/69.1% load, anchored on
/// 128.4 ms mean latency at 2 pods.
SweepSpec reference_sweep();

nlohmann::json sim_metrics_to_json(const SimMetrics& metrics);

}  // namespace hewflow::sim
