// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/sim/config.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "hewflow/common/error.h"

namespace hewflow::sim {

using nlohmann::json;

namespace {

const char* const kOpNames[6] = {"MUL_PLAIN", "ADD_CT",  "ADD_PLAIN",
                                 "MUL_CT",    "RESCALE", "MOD_SWITCH"};

/// A JSON object with its dotted path, for diagnostics.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError((path_.empty() ? "config" : path_) + ": " + what);
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& item : j_.items()) {
      if (!known.count(item.key())) {
        throw ValidationError(at(item.key()) + ": unknown key");
      }
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  Node child(const std::string& key) const { return Node(j_.at(key), at(key)); }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ValidationError(at(key) + ": expected a number");
    return v.get<double>();
  }

  size_t count(const std::string& key, size_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<int64_t>() < 0) {
      throw ValidationError(at(key) + ": expected a non-negative integer");
    }
    return v.get<size_t>();
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ValidationError(at(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ValidationError(at(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<Node> list(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_array()) throw ValidationError(at(key) + ": expected an array");
    std::vector<Node> out;
    for (size_t i = 0; i < v.size(); ++i) {
      out.emplace_back(v[i], at(key) + "[" + std::to_string(i) + "]");
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
};

PodSpec parse_pod(const Node& n) {
  n.allow({"capacity", "accel_multiplier", "startup_delay_s", "base_memory_mb"});
  PodSpec pod;
  pod.capacity = n.number("capacity", pod.capacity);
  pod.accel_multiplier = n.number("accel_multiplier", pod.accel_multiplier);
  pod.startup_delay_s = n.number("startup_delay_s", pod.startup_delay_s);
  pod.base_memory_mb = n.number("base_memory_mb", pod.base_memory_mb);
  return pod;
}

UnitCosts parse_unit_costs(const Node& n) {
  n.allow({kOpNames[0], kOpNames[1], kOpNames[2], kOpNames[3], kOpNames[4], kOpNames[5]});
  UnitCosts costs{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  for (size_t k = 0; k < 6; ++k) {
    costs[k] = n.number(kOpNames[k], costs[k]);
    if (!(costs[k] >= 0.0)) n.fail(std::string(kOpNames[k]) + " must be non-negative");
  }
  return costs;
}

ClusterConfig parse_cluster(const Node& n) {
  n.allow({"min_pods", "max_pods", "initial_pods", "hpa_target_utilization",
           "hpa_interval_s", "hpa_window", "hpa_enabled", "pod_templates", "policy",
           "depth_threshold"});
  ClusterConfig c;
  c.min_pods = n.count("min_pods", c.min_pods);
  c.max_pods = n.count("max_pods", std::max(c.min_pods, c.max_pods));
  c.initial_pods = n.count("initial_pods", c.initial_pods);
  c.hpa_target_utilization = n.number("hpa_target_utilization", c.hpa_target_utilization);
  c.hpa_interval_s = n.number("hpa_interval_s", c.hpa_interval_s);
  c.hpa_window = n.count("hpa_window", c.hpa_window);
  c.hpa_enabled = n.flag("hpa_enabled", c.hpa_enabled);
  c.depth_threshold = static_cast<int>(n.count("depth_threshold", 3));
  if (n.has("policy")) {
    try {
      c.policy = policy_from_string(n.text("policy", ""));
    } catch (const ValidationError& e) {
      throw ValidationError(n.at("policy") + ": " + e.what());
    }
  }
  if (n.has("pod_templates")) {
    c.templates.clear();
    for (const Node& t : n.list("pod_templates")) c.templates.push_back(parse_pod(t));
  }
  c.validate();
  return c;
}

WorkloadSpec parse_workload(const Node& n, const UnitCosts& costs) {
  n.allow({"kind", "rate", "clients", "think_time_s", "horizon_s", "mix"});
  WorkloadSpec w;
  const std::string kind = n.text("kind", "poisson");
  if (kind == "poisson") {
    w.kind = WorkloadKind::kPoisson;
  } else if (kind == "closed_loop") {
    w.kind = WorkloadKind::kClosedLoop;
  } else {
    throw ValidationError(n.at("kind") + ": expected \"poisson\" or \"closed_loop\"");
  }
  w.rate = n.number("rate", w.rate);
  w.clients = n.count("clients", w.clients);
  w.think_time_s = n.number("think_time_s", w.think_time_s);
  w.horizon_s = n.number("horizon_s", w.horizon_s);
  if (n.has("mix")) {
    w.mix.clear();
    for (const Node& m : n.list("mix")) {
      m.allow({"name", "cost", "op_counts", "depth", "ciphertext_bytes", "weight"});
      CircuitProfile p;
      p.name = m.text("name", p.name);
      if (m.has("op_counts")) {
        if (m.has("cost")) m.fail("give either cost or op_counts, not both");
        const Node ops = m.child("op_counts");
        ops.allow({kOpNames[0], kOpNames[1], kOpNames[2], kOpNames[3], kOpNames[4],
                   kOpNames[5]});
        OpCounts counts{};
        for (size_t k = 0; k < 6; ++k) counts[k] = ops.count(kOpNames[k], 0);
        p.cost = circuit_cost(counts, costs);
      } else {
        p.cost = m.number("cost", p.cost);
      }
      p.depth = static_cast<int>(m.count("depth", 1));
      p.ciphertext_bytes = m.count("ciphertext_bytes", 0);
      p.weight = m.number("weight", p.weight);
      w.mix.push_back(p);
    }
  }
  w.validate();
  return w;
}

SweepSpec parse_sweep(const Node& n, const ClusterConfig& cluster) {
  n.allow({"points", "calibrate_on", "horizon_s", "horizon_services", "warmup_fraction",
           "ciphertext_bytes"});
  SweepSpec s = reference_sweep();
  s.pod = cluster.templates.front();
  if (n.has("points")) {
    s.points.clear();
    for (const Node& p : n.list("points")) {
      p.allow({"pods", "utilization"});
      s.points.push_back({p.count("pods", 0), p.number("utilization", 0.0)});
    }
  }
  if (n.has("calibrate_on")) {
    const Node c = n.child("calibrate_on");
    c.allow({"pods", "latency_ms", "utilization"});
    s.calibrate_on = {c.count("pods", 0), c.number("latency_ms", 0.0),
                      c.number("utilization", 0.0)};
  }
  s.horizon_s = n.number("horizon_s", s.horizon_s);
  s.horizon_services = n.number("horizon_services", s.horizon_services);
  s.warmup_fraction = n.number("warmup_fraction", s.warmup_fraction);
  s.task.ciphertext_bytes = n.count("ciphertext_bytes", s.task.ciphertext_bytes);
  if (!(s.warmup_fraction >= 0.0 && s.warmup_fraction < 1.0)) {
    throw ValidationError(n.at("warmup_fraction") + ": must lie in [0, 1)");
  }
  return s;
}

}  // namespace

SweepSpec reference_sweep() {
  SweepSpec s;
  s.points = {{2, 0.831}, {4, 0.765}, {6, 0.704}, {8, 0.691}};
  s.calibrate_on = {2, 128.4, 0.831};
  s.task.name = "inference";
  s.task.depth = 3;
  s.task.ciphertext_bytes = 64ull << 20;
  return s;
}

SimConfig sim_config_from_json(const json& doc) {
  const Node root(doc, "");
  root.allow({"cluster", "workload", "unit_costs", "options", "seed", "sweep"});
  SimConfig config;
  if (root.has("seed")) config.seed = root.count("seed", 1);
  if (root.has("unit_costs")) config.unit_costs = parse_unit_costs(root.child("unit_costs"));
  if (root.has("cluster")) config.cluster = parse_cluster(root.child("cluster"));
  if (root.has("workload")) {
    config.workload = parse_workload(root.child("workload"), config.unit_costs);
  }
  if (root.has("options")) {
    const Node o = root.child("options");
    o.allow({"warmup_s", "overhead_ms"});
    config.options.warmup_s = o.number("warmup_s", 0.0);
    config.options.overhead_ms = o.number("overhead_ms", 0.0);
  }
  if (root.has("sweep")) config.sweep = parse_sweep(root.child("sweep"), config.cluster);
  return config;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open simulation config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
  return sim_config_from_json(doc);
}

json sim_metrics_to_json(const SimMetrics& m) {
  json j;
  j["mean_latency_ms"] = m.mean_latency_ms;
  j["p50_latency_ms"] = m.p50_latency_ms;
  j["p95_latency_ms"] = m.p95_latency_ms;
  j["p99_latency_ms"] = m.p99_latency_ms;
  j["throughput_rps"] = m.throughput_rps;
  j["mean_utilization"] = m.mean_utilization;
  j["memory_per_pod_mb"] = m.memory_per_pod_mb;
  j["memory_total_mb"] = m.memory_total_mb;
  j["mean_pods"] = m.mean_pods;
  j["arrived"] = m.arrived;
  j["completed"] = m.completed;
  j["queued"] = m.queued;
  j["in_service"] = m.in_service;
  j["dropped"] = m.dropped;
  j["min_pods_seen"] = m.min_pods_seen;
  j["max_pods_seen"] = m.max_pods_seen;
  j["completed_per_pod"] = m.completed_per_pod;
  j["utilization_timeline"] = json::array();
  for (const auto& [t, u] : m.utilization_timeline) {
    j["utilization_timeline"].push_back({{"t", t}, {"utilization", u}});
  }
  j["pod_timeline"] = json::array();
  for (const auto& [t, p] : m.pod_timeline) {
    j["pod_timeline"].push_back({{"t", t}, {"pods", p}});
  }
  return j;
}

}  // namespace hewflow::sim
