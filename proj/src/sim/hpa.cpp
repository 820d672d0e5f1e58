// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hewflow/common/error.h"
#include "hewflow/sim/sim.h"

namespace hewflow::sim {

size_t hpa_step(const std::vector<double>& window, size_t current,
                const ClusterConfig& config) {
  if (window.empty()) throw ValidationError("HPA window is empty");
  const double mean =
      std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(window.size());
  const double raw = static_cast<double>(current) * mean / config.hpa_target_utilization;
  const auto desired = static_cast<size_t>(std::max(0.0, std::ceil(raw - 1e-9)));
  return std::clamp(desired, config.min_pods, config.max_pods);
}

}  // namespace hewflow::sim
