// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/sim/sim.h"

namespace hewflow::sim {

size_t schedule(const Task& task, const std::vector<PodView>& pods,
                SchedulerPolicy policy, int depth_threshold, size_t& cursor) {
  std::vector<size_t> open;
  for (size_t i = 0; i < pods.size(); ++i) {
    if (pods[i].accepting) open.push_back(i);
  }
  if (open.empty()) return SIZE_MAX;
  if (policy == SchedulerPolicy::kRoundRobin) {
    return open[cursor++ % open.size()];
  }
  const bool deep = task.depth >= depth_threshold;
  size_t best = open.front();
  for (size_t i : open) {
    const PodView& a = pods[i];
    const PodView& b = pods[best];
    if (deep && a.speed != b.speed) {
      if (a.speed > b.speed) best = i;
      continue;
    }
    if (a.queue_length != b.queue_length) {
      if (a.queue_length < b.queue_length) best = i;
      continue;
    }
    if (a.id < b.id) best = i;
  }
  return best;
}

}  // namespace hewflow::sim
