// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <string>

#include "hewflow/common/random.h"
#include "hewflow/sim/sim.h"
#include "internal.h"

namespace hewflow::sim {

namespace {

// Same-time events run in this order.
enum class EventKind { kPodReady = 0, kCompletion = 1, kHpaTick = 2, kArrival = 3 };

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::kArrival;
  uint64_t seq = 0;
  size_t pod = 0;
  size_t task = 0;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t > b.t;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.seq > b.seq;
  }
};

struct Pod {
  PodSpec spec;
  bool ready = false;
  bool draining = false;
  bool removed = false;
  double ready_at = 0.0;
  std::deque<size_t> queue;
  double busy_since = 0.0;
  double interval_busy = 0.0;
  uint64_t live_bytes = 0;
  size_t completed = 0;
};

constexpr double kMiB = 1024.0 * 1024.0;

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<size_t>(rank, 1, sorted.size()) - 1];
}

class Simulation {
 public:
  Simulation(const ClusterConfig& cluster, const WorkloadSpec& workload, uint64_t seed,
             const SimOptions& options)
      : cluster_(cluster),
        workload_(workload),
        options_(options),
        followups_(derive_seed(seed, 3)) {}

  SimMetrics run(const std::vector<Task>& tasks) {
    tasks_ = tasks;
    std::stable_sort(tasks_.begin(), tasks_.end(), [](const Task& a, const Task& b) {
      return a.arrival_s < b.arrival_s;
    });
    for (size_t i = 0; i < tasks_.size(); ++i) push({tasks_[i].arrival_s, EventKind::kArrival, 0, 0, i});
    const size_t initial = cluster_.initial_pods ? cluster_.initial_pods : cluster_.min_pods;
    for (size_t i = 0; i < initial; ++i) add_pod(0.0, true);
    record_pods(0.0);
    push({cluster_.hpa_interval_s, EventKind::kHpaTick, 0, 0, 0});

    const double horizon = workload_.horizon_s;
    while (!events_.empty() && events_.top().t <= horizon) {
      const Event e = events_.top();
      events_.pop();
      advance(e.t);
      switch (e.kind) {
        case EventKind::kArrival:
          ++m_.arrived;
          dispatch(e.task, e.t);
          break;
        case EventKind::kCompletion:
          complete(e.pod, e.t);
          break;
        case EventKind::kHpaTick:
          tick(e.t);
          break;
        case EventKind::kPodReady:
          pod_ready(e.pod, e.t);
          break;
      }
      if (m_.arrived != m_.completed + pending_.size() + in_pods_) {
        throw std::logic_error("simulator lost track of a task");
      }
    }
    advance(horizon);
    for (size_t p = 0; p < pods_.size(); ++p) {
      if (!pods_[p].removed && !pods_[p].queue.empty()) credit_busy(p, horizon);
    }
    return finish(horizon);
  }

 private:
  void push(Event e) {
    e.seq = next_seq_++;
    events_.push(e);
  }

  size_t active_pods() const {
    size_t n = 0;
    for (const Pod& p : pods_) n += (!p.removed && !p.draining) ? 1 : 0;
    return n;
  }

  void record_pods(double t) {
    const size_t n = active_pods();
    if (m_.pod_timeline.empty() || m_.pod_timeline.back().second != n) {
      m_.pod_timeline.emplace_back(t, n);
    }
    m_.min_pods_seen = m_.pod_timeline.size() == 1 ? n : std::min(m_.min_pods_seen, n);
    m_.max_pods_seen = std::max(m_.max_pods_seen, n);
  }

  void add_pod(double t, bool immediate) {
    Pod pod;
    pod.spec = cluster_.templates[pods_.size() % cluster_.templates.size()];
    const size_t id = pods_.size();
    pods_.push_back(pod);
    if (immediate || pod.spec.startup_delay_s == 0.0) {
      pods_[id].ready = true;
      pods_[id].ready_at = t;
    } else {
      push({t + pod.spec.startup_delay_s, EventKind::kPodReady, 0, id, 0});
    }
  }

  // Integrates pod-time, busy time and memory up to t.
  void advance(double t) {
    const double from = std::max(now_, options_.warmup_s);
    if (t > from) {
      const double dt = t - from;
      double pods = 0.0, mb = 0.0;
      for (const Pod& p : pods_) {
        if (!p.ready || p.removed) continue;
        pods += 1.0;
        mb += p.spec.base_memory_mb + static_cast<double>(p.live_bytes) / kMiB;
      }
      pod_time_ += pods * dt;
      memory_time_ += mb * dt;
    }
    now_ = std::max(now_, t);
  }

  void credit_busy(size_t p, double t) {
    Pod& pod = pods_[p];
    pod.interval_busy += t - std::max(pod.busy_since, interval_start_);
    busy_time_ += std::max(0.0, t - std::max(pod.busy_since, options_.warmup_s));
    pod.busy_since = t;
  }

  void start_service(size_t p, double t) {
    Pod& pod = pods_[p];
    const Task& task = tasks_[pod.queue.front()];
    pod.busy_since = t;
    push({t + task.cost / pod.spec.speed(), EventKind::kCompletion, 0, p, 0});
  }

  void dispatch(size_t index, double t) {
    std::vector<PodView> views(pods_.size());
    for (size_t p = 0; p < pods_.size(); ++p) {
      const Pod& pod = pods_[p];
      views[p] = {p, pod.spec.speed(), pod.queue.size(),
                  pod.ready && !pod.draining && !pod.removed};
    }
    const size_t p = schedule(tasks_[index], views, cluster_.policy,
                              cluster_.depth_threshold, cursor_);
    if (p == SIZE_MAX) {
      pending_.push_back(index);
      return;
    }
    Pod& pod = pods_[p];
    pod.queue.push_back(index);
    pod.live_bytes += tasks_[index].ciphertext_bytes;
    ++in_pods_;
    if (pod.queue.size() == 1) start_service(p, t);
  }

  void complete(size_t p, double t) {
    Pod& pod = pods_[p];
    credit_busy(p, t);
    const size_t index = pod.queue.front();
    pod.queue.pop_front();
    --in_pods_;
    const Task& task = tasks_[index];
    pod.live_bytes -= task.ciphertext_bytes;
    ++pod.completed;
    ++m_.completed;
    if (task.arrival_s >= options_.warmup_s) {
      m_.latencies_ms.push_back((t - task.arrival_s) * 1e3 + options_.overhead_ms);
    }
    if (task.client != SIZE_MAX) {
      const double next =
          t + (workload_.think_time_s > 0.0 ? exponential(followups_, workload_.think_time_s)
                                            : 0.0);
      if (next < workload_.horizon_s) {
        Task follow = make_task(workload_, tasks_.size(), next, followups_);
        follow.client = task.client;
        tasks_.push_back(follow);
        push({next, EventKind::kArrival, 0, 0, tasks_.size() - 1});
      }
    }
    if (!pod.queue.empty()) {
      start_service(p, t);
    } else if (pod.draining) {
      pod.removed = true;
    }
  }

  void pod_ready(size_t p, double t) {
    Pod& pod = pods_[p];
    if (pod.removed) return;
    pod.ready = true;
    pod.ready_at = t;
    flush_pending(t);
  }

  void flush_pending(double t) {
    std::deque<size_t> waiting;
    waiting.swap(pending_);
    for (size_t index : waiting) dispatch(index, t);
  }

  void tick(double t) {
    double sum = 0.0;
    size_t count = 0;
    for (size_t p = 0; p < pods_.size(); ++p) {
      Pod& pod = pods_[p];
      if (!pod.ready || pod.removed) continue;
      if (!pod.queue.empty()) credit_busy(p, t);
      const double span = t - std::max(interval_start_, pod.ready_at);
      if (span > 0.0) {
        sum += std::clamp(pod.interval_busy / span, 0.0, 1.0);
        ++count;
      }
    }
    for (Pod& pod : pods_) pod.interval_busy = 0.0;
    interval_start_ = t;
    const double util = count ? sum / static_cast<double>(count) : 0.0;
    m_.utilization_timeline.emplace_back(t, util);
    window_.push_back(util);
    while (window_.size() > cluster_.hpa_window) window_.pop_front();

    if (cluster_.hpa_enabled && count > 0) {
      const size_t current = active_pods();
      const size_t desired =
          hpa_step(std::vector<double>(window_.begin(), window_.end()), current, cluster_);
      for (size_t i = current; i < desired; ++i) add_pod(t, false);
      for (size_t i = desired; i < current; ++i) drain_highest();
      record_pods(t);
      flush_pending(t);
    }
    push({t + cluster_.hpa_interval_s, EventKind::kHpaTick, 0, 0, 0});
  }

  void drain_highest() {
    for (size_t p = pods_.size(); p-- > 0;) {
      Pod& pod = pods_[p];
      if (pod.removed || pod.draining) continue;
      pod.draining = true;
      if (pod.queue.empty()) pod.removed = true;
      return;
    }
  }

  SimMetrics finish(double horizon) {
    for (const Pod& pod : pods_) {
      if (pod.removed || pod.queue.empty()) continue;
      ++m_.in_service;
      m_.queued += pod.queue.size() - 1;
    }
    m_.queued += pending_.size();
    m_.completed_per_pod.reserve(pods_.size());
    for (const Pod& pod : pods_) m_.completed_per_pod.push_back(pod.completed);

    const double span = horizon - std::min(horizon, options_.warmup_s);
    auto sorted = m_.latencies_ms;
    std::sort(sorted.begin(), sorted.end());
    if (!sorted.empty()) {
      double total = 0.0;
      for (double v : sorted) total += v;
      m_.mean_latency_ms = total / static_cast<double>(sorted.size());
    }
    m_.p50_latency_ms = percentile(sorted, 0.50);
    m_.p95_latency_ms = percentile(sorted, 0.95);
    m_.p99_latency_ms = percentile(sorted, 0.99);
    if (span > 0.0) {
      m_.throughput_rps = static_cast<double>(sorted.size()) / span;
      m_.mean_pods = pod_time_ / span;
      m_.memory_total_mb = memory_time_ / span;
    }
    if (pod_time_ > 0.0) {
      m_.mean_utilization = std::clamp(busy_time_ / pod_time_, 0.0, 1.0);
      m_.memory_per_pod_mb = memory_time_ / pod_time_;
    }
    return m_;
  }

  const ClusterConfig& cluster_;
  const WorkloadSpec& workload_;
  SimOptions options_;
  Prng followups_;
  std::vector<Task> tasks_;
  std::vector<Pod> pods_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::deque<size_t> pending_;
  std::deque<double> window_;
  uint64_t next_seq_ = 0;
  size_t cursor_ = 0;
  size_t in_pods_ = 0;
  double now_ = 0.0;
  double interval_start_ = 0.0;
  double pod_time_ = 0.0;
  double busy_time_ = 0.0;
  double memory_time_ = 0.0;
  SimMetrics m_;
};

}  // namespace

SimMetrics run_sim(const ClusterConfig& cluster, const WorkloadSpec& workload,
                   const std::vector<Task>& tasks, uint64_t seed, const SimOptions& options) {
  cluster.validate();
  workload.validate();
  return Simulation(cluster, workload, seed, options).run(tasks);
}

SimMetrics run_sim(const ClusterConfig& cluster, const WorkloadSpec& workload,
                   uint64_t seed, const SimOptions& options) {
  return run_sim(cluster, workload, generate_workload(workload, seed), seed, options);
}

}  // namespace hewflow::sim
