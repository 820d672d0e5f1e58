// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/bench/bench.h"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hewflow/ckks/keys.h"
#include "hewflow/common/error.h"
#include "hewflow/common/random.h"
#include "hewflow/compiler/compiler.h"
#include "hewflow/compiler/reference_models.h"
#include "hewflow/engine/engine.h"

namespace hewflow::bench {

using compiler::CompileOptions;
using compiler::RescaleMode;
using Clock = std::chrono::steady_clock;

namespace {

struct Config {
  std::string label;
  CompileOptions compile;
  bool packed = true;
};

struct Scenario {
  std::string name;
  std::string default_model;
  Config baseline;
  Config optimized;
};

const std::vector<Scenario>& scenario_table() {
  static const std::vector<Scenario> table = {
      {"packing", "logistic",
       {"per-sample B=1", {true, RescaleMode::kEager}, false},
       {"packed", {true, RescaleMode::kEager}, true}},
      {"fusion", "mlp",
       {"unfused", {false, RescaleMode::kEager}, true},
       {"fused", {true, RescaleMode::kEager}, true}},
      {"modswitch", "logistic",
       {"rescale off", {true, RescaleMode::kOff}, true},
       {"eager rescale", {true, RescaleMode::kEager}, true}},
      {"e2e", "logistic",
       {"baseline (unfused, rescale off, B=1)", {false, RescaleMode::kOff}, false},
       {"optimized (fused, eager rescale, packed)", {true, RescaleMode::kEager}, true}},
  };
  return table;
}

std::map<std::string, std::string> machine_info() {
  std::map<std::string, std::string> m;
  utsname u{};
  if (uname(&u) == 0) {
    m["system"] = std::string(u.sysname) + " " + u.release;
    m["arch"] = u.machine;
  }
  m["hardware_threads"] = std::to_string(std::thread::hardware_concurrency());
  m["compiler"] = __VERSION__;
  return m;
}

/// Compiled circuit of one configuration and its encrypted inputs.
struct Prepared {
  compiler::CompiledCircuit circuit;
  bool packed = true;
  engine::EncryptedBatch packed_batch;
};

Prepared prepare(const Config& config, const compiler::ModelGraph& model,
                 const engine::Samples& rows, const ckks::SchemeParams& params,
                 const ckks::PublicKey& pk, uint64_t seed) {
  Prepared p;
  p.packed = config.packed;
  p.circuit = compiler::compile(model, params, config.packed ? rows.size() : 1, config.compile);
  if (config.packed) {
    p.packed_batch =
        engine::encrypt_batch(rows, model.input_width(), pk, params, derive_seed(seed, 0));
  }
  return p;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// One timed execution of the packed batch.
double run_packed(const engine::Engine& eng, const Prepared& p,
                  std::vector<engine::EncryptedBatch>* outputs, Measurement& m) {
  const auto start = Clock::now();
  auto result = eng.execute(p.circuit, p.packed_batch);
  const double ms = elapsed_ms(start);
  m.avg_ciphertext_bytes = result.metrics.avg_live_ciphertext_bytes;
  m.dispatches = result.metrics.dispatches;
  m.executions = 1;
  if (outputs) outputs->push_back(std::move(result.outputs));
  return ms;
}

/// Sequential per-sample executions. Each sample is encrypted once, outside
/// the timed region, and executed `runs` times; run k of every sample is
/// booked to pass k. Returns the summed execution ms of each pass.
std::vector<double> run_per_sample(const engine::Engine& eng, const Prepared& p,
                                   const engine::Samples& rows, size_t width,
                                   const ckks::SchemeParams& params, const ckks::PublicKey& pk,
                                   uint64_t seed, size_t runs,
                                   std::vector<engine::EncryptedBatch>& outputs,
                                   Measurement& m) {
  std::vector<double> pass_ms(runs, 0.0);
  double bytes = 0.0;
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto batch = engine::encrypt_batch({rows[r]}, width, pk, params, derive_seed(seed, r + 1));
    for (size_t k = 0; k < runs; ++k) {
      const auto start = Clock::now();
      auto result = eng.execute(p.circuit, batch);
      pass_ms[k] += elapsed_ms(start);
      if (k == 0) {
        bytes += result.metrics.avg_live_ciphertext_bytes;
        m.dispatches = result.metrics.dispatches;
        outputs.push_back(std::move(result.outputs));
      }
    }
  }
  m.avg_ciphertext_bytes = bytes / static_cast<double>(rows.size());
  m.executions = rows.size();
  return pass_ms;
}

engine::Samples decrypt_all(const std::vector<engine::EncryptedBatch>& outputs,
                            const ckks::SecretKey& sk, const ckks::SchemeParams& params) {
  engine::Samples rows;
  for (const auto& b : outputs) {
    auto part = engine::decrypt_batch(b, sk, params);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace

const std::vector<std::string>& scenarios() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : scenario_table()) v.push_back(s.name);
    return v;
  }();
  return names;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::map<std::string, double> compute_ratios(const Measurement& baseline,
                                             const Measurement& optimized) {
  std::map<std::string, double> r;
  r["speedup"] = baseline.median_ms / optimized.median_ms;
  r["latency_reduction"] = 1.0 - optimized.median_ms / baseline.median_ms;
  r["throughput_gain"] = optimized.throughput_rps / baseline.throughput_rps;
  if (baseline.avg_ciphertext_bytes > 0.0) {
    r["size_reduction"] = 1.0 - optimized.avg_ciphertext_bytes / baseline.avg_ciphertext_bytes;
  }
  if (baseline.dispatches > 0) {
    r["dispatch_ratio"] = static_cast<double>(optimized.dispatches) /
                          static_cast<double>(baseline.dispatches);
  }
  return r;
}

bool ratios_consistent(const BenchReport& report, double tolerance) {
  auto check = [&](const Measurement& m) {
    if (m.latency_ms.empty()) return false;
    const double med = median(m.latency_ms);
    return std::fabs(med - m.median_ms) <= tolerance * std::max(1.0, med) &&
           std::fabs(m.samples / (med / 1e3) - m.throughput_rps) <=
               tolerance * std::max(1.0, m.throughput_rps);
  };
  if (!check(report.baseline) || !check(report.optimized)) return false;
  const auto fresh = compute_ratios(report.baseline, report.optimized);
  if (fresh.size() != report.ratios.size()) return false;
  for (const auto& [key, value] : fresh) {
    const auto it = report.ratios.find(key);
    if (it == report.ratios.end()) return false;
    if (std::fabs(it->second - value) > tolerance * std::max(1.0, std::fabs(value))) {
      return false;
    }
  }
  return true;
}

BenchReport run_bench(const std::string& scenario, const BenchOptions& options) {
  const auto& table = scenario_table();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const Scenario& s) { return s.name == scenario; });
  if (it == table.end()) {
    throw ValidationError("unknown bench scenario '" + scenario +
                          "' (expected packing, fusion, modswitch or e2e)");
  }
  if (options.repetitions < 5) {
    throw ValidationError("benchmarks need at least 5 repetitions");
  }
  if (options.samples == 0) throw ValidationError("benchmarks need at least one sample");

  const std::string model_name = options.model.empty() ? it->default_model : options.model;
  const auto params = ckks::SchemeParams::with_depth(2048, options.depth);
  if (options.samples > params.slot_count()) {
    throw ValidationError("sample count exceeds the " + std::to_string(params.slot_count()) +
                          " slots of one ciphertext");
  }
  const auto keys = ckks::keygen(params, derive_seed(options.seed, 100));
  const auto model = compiler::reference_model(model_name, options.seed);
  const auto data =
      compiler::reference_dataset(model_name, options.samples, derive_seed(options.seed, 101));

  const uint64_t base_seed = derive_seed(options.seed, 102);
  const uint64_t opt_seed = derive_seed(options.seed, 103);
  const Prepared base = prepare(it->baseline, model, data.rows, params, keys.public_key, base_seed);
  const Prepared opt = prepare(it->optimized, model, data.rows, params, keys.public_key, opt_seed);
  const engine::Engine eng(params, &keys.relin);

  BenchReport report;
  report.scenario = scenario;
  report.model = model_name;
  report.repetitions = options.repetitions;
  report.warmups = options.warmups;
  report.machine = machine_info();
  report.baseline.label = it->baseline.label;
  report.optimized.label = it->optimized.label;

  const size_t runs = options.warmups + options.repetitions;
  std::vector<engine::EncryptedBatch> base_out, opt_out;
  std::vector<double> base_ms(runs), opt_ms(runs);
  if (!base.packed) {
    base_ms = run_per_sample(eng, base, data.rows, model.input_width(), params,
                             keys.public_key, base_seed, runs, base_out, report.baseline);
  }
  if (!opt.packed) {
    opt_ms = run_per_sample(eng, opt, data.rows, model.input_width(), params, keys.public_key,
                            opt_seed, runs, opt_out, report.optimized);
  }
  // Packed configurations alternate run by run.
  for (size_t k = 0; k < runs; ++k) {
    if (base.packed) base_ms[k] = run_packed(eng, base, k == 0 ? &base_out : nullptr, report.baseline);
    if (opt.packed) opt_ms[k] = run_packed(eng, opt, k == 0 ? &opt_out : nullptr, report.optimized);
  }
  for (size_t k = options.warmups; k < runs; ++k) {
    report.baseline.latency_ms.push_back(base_ms[k]);
    report.optimized.latency_ms.push_back(opt_ms[k]);
  }
  for (Measurement* m : {&report.baseline, &report.optimized}) {
    m->samples = options.samples;
    m->median_ms = median(m->latency_ms);
    m->throughput_rps = static_cast<double>(m->samples) / (m->median_ms / 1e3);
  }
  report.ratios = compute_ratios(report.baseline, report.optimized);

  const auto a = decrypt_all(base_out, keys.secret, params);
  const auto b = decrypt_all(opt_out, keys.secret, params);
  report.max_output_diff = engine::compare_outputs(b, a).max_abs_error;
  return report;
}

namespace {

nlohmann::json measurement_to_json(const Measurement& m) {
  return {{"label", m.label},
          {"latency_ms", m.latency_ms},
          {"median_ms", m.median_ms},
          {"throughput_rps", m.throughput_rps},
          {"avg_ciphertext_bytes", m.avg_ciphertext_bytes},
          {"dispatches", m.dispatches},
          {"executions", m.executions},
          {"samples", m.samples}};
}

Measurement measurement_from_json(const nlohmann::json& j) {
  Measurement m;
  m.label = j.at("label").get<std::string>();
  m.latency_ms = j.at("latency_ms").get<std::vector<double>>();
  m.median_ms = j.at("median_ms").get<double>();
  m.throughput_rps = j.at("throughput_rps").get<double>();
  m.avg_ciphertext_bytes = j.at("avg_ciphertext_bytes").get<double>();
  m.dispatches = j.at("dispatches").get<size_t>();
  m.executions = j.at("executions").get<size_t>();
  m.samples = j.at("samples").get<size_t>();
  return m;
}

}  // namespace

nlohmann::json report_to_json(const BenchReport& r) {
  return {{"scenario", r.scenario},
          {"model", r.model},
          {"repetitions", r.repetitions},
          {"warmups", r.warmups},
          {"baseline", measurement_to_json(r.baseline)},
          {"optimized", measurement_to_json(r.optimized)},
          {"ratios", r.ratios},
          {"max_output_diff", r.max_output_diff},
          {"machine", r.machine}};
}

BenchReport report_from_json(const nlohmann::json& j) {
  try {
    BenchReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.repetitions = j.at("repetitions").get<size_t>();
    r.warmups = j.at("warmups").get<size_t>();
    r.baseline = measurement_from_json(j.at("baseline"));
    r.optimized = measurement_from_json(j.at("optimized"));
    r.ratios = j.at("ratios").get<std::map<std::string, double>>();
    r.max_output_diff = j.at("max_output_diff").get<double>();
    r.machine = j.at("machine").get<std::map<std::string, std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed bench report: ") + e.what());
  }
}

std::string report_markdown(const std::vector<BenchReport>& reports) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "| Scenario | Model | Configuration | Median latency (ms) | Throughput (req/s) "
         "| Avg ciphertext (bytes) | Dispatches |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    for (const Measurement* m : {&r.baseline, &r.optimized}) {
      out << "| " << r.scenario << " | " << r.model << " | " << m->label << " | "
          << m->median_ms << " | " << m->throughput_rps << " | " << std::setprecision(0)
          << m->avg_ciphertext_bytes << std::setprecision(2) << " | " << m->dispatches
          << " x " << m->executions << " |\n";
    }
  }
  out << "\n| Scenario | Speedup | Latency reduction | Size reduction | Dispatch ratio |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    auto get = [&](const char* k) {
      const auto it = r.ratios.find(k);
      return it == r.ratios.end() ? std::string("-") : [&] {
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << it->second;
        return s.str();
      }();
    };
    out << "| " << r.scenario << " | " << get("speedup") << " | " << get("latency_reduction")
        << " | " << get("size_reduction") << " | " << get("dispatch_ratio") << " |\n";
  }
  if (!reports.empty()) {
    out << "\nMedians of " << reports.front().repetitions << " repetitions after "
        << reports.front().warmups << " warm-up; machine: ";
    for (const auto& [k, v] : reports.front().machine) out << k << "=" << v << "; ";
    out << "\n";
  }
  return out.str();
}

}  // namespace hewflow::bench
