// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/bench/commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hewflow/bench/bench.h"
#include "hewflow/ckks/keys.h"
#include "hewflow/common/error.h"
#include "hewflow/common/random.h"
#include "hewflow/compiler/compiler.h"
#include "hewflow/compiler/reference_models.h"
#include "hewflow/engine/engine.h"
#include "hewflow/io/blob.h"
#include "hewflow/io/csv.h"
#include "hewflow/io/workspace.h"
#include "hewflow/sim/config.h"

namespace hewflow::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::optional<std::string> workspace;
  std::optional<uint64_t> seed;

  io::Workspace ws() const { return io::Workspace::resolve(workspace); }
  uint64_t seed_or(uint64_t fallback) const { return seed.value_or(fallback); }
};

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + " not found");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

bool on_off(const std::string& flag) { return flag == "on"; }

compiler::ModelGraph resolve_model(const io::Workspace& ws, const std::string& flag,
                                   uint64_t seed) {
  if (flag.empty()) {
    if (!fs::exists(ws.model())) {
      throw ValidationError(ws.model().string() +
                            " not found; pass --model <path|logistic|mlp|cnn>");
    }
    return compiler::load_model(ws.model().string());
  }
  if (fs::exists(flag)) return compiler::load_model(flag);
  if (flag == "logistic" || flag == "lr" || flag == "mlp" || flag == "cnn") {
    return compiler::reference_model(flag, seed);
  }
  throw ValidationError("model '" + flag + "' is neither a file nor a reference model");
}

// keygen -------------------------------------------------------------------

struct KeygenArgs {
  size_t depth = 7;
  size_t n = 2048;
  bool force = false;
};

int cmd_keygen(const Globals& g, const KeygenArgs& a, std::ostream& out, std::ostream& err) {
  err << kDisclaimer << "\n";
  const auto ws = g.ws();
  for (const auto& p : {ws.params(), ws.public_key(), ws.secret_key(), ws.relin_key()}) {
    if (fs::exists(p) && !a.force) {
      throw ValidationError(p.string() + " already exists; pass --force to overwrite");
    }
  }
  const auto params = ckks::SchemeParams::with_depth(a.n, a.depth);
  const auto keys = ckks::keygen(params, g.seed_or(1));
  fs::create_directories(ws.root());
  write_json(ws.params(), io::params_to_json(params));
  io::write_file(ws.public_key().string(), io::serialize(keys.public_key));
  io::write_file(ws.relin_key().string(), io::serialize(keys.relin));
  io::write_file(ws.secret_key().string(), io::serialize(keys.secret));
  fs::permissions(ws.secret_key(), fs::perms::owner_read | fs::perms::owner_write,
                  fs::perm_options::replace);
  out << "params " << ckks::to_hex(params.hash) << " (n=" << params.n()
      << ", limbs=" << params.max_level() << ")\n";
  out << "wrote " << ws.params().string() << ", " << ws.public_key().string() << ", "
      << ws.relin_key().string() << ", " << ws.secret_key().string() << "\n";
  return kExitOk;
}

// encrypt ------------------------------------------------------------------

struct EncryptArgs {
  std::string input;
  size_t batch = 0;
};

int cmd_encrypt(const Globals& g, const EncryptArgs& a, std::ostream& out, std::ostream& err) {
  err << kDisclaimer << "\n";
  const auto ws = g.ws();
  const auto params = ws.load_params();
  const auto pk = ws.load_public_key(params);
  const auto table = io::read_csv(a.input);
  if (fs::exists(ws.model())) {
    const auto model = compiler::load_model(ws.model().string());
    if (model.input_width() != table.header.size()) {
      throw ValidationError(a.input + " has " + std::to_string(table.header.size()) +
                            " columns but the model expects " +
                            std::to_string(model.input_width()));
    }
  }
  const size_t batch =
      a.batch ? a.batch : std::clamp<size_t>(table.rows.size(), 1, params.slot_count());
  if (batch > params.slot_count()) {
    throw ValidationError("--batch " + std::to_string(batch) + " exceeds the " +
                          std::to_string(params.slot_count()) + " slots per ciphertext");
  }
  fs::remove_all(ws.ct_dir());
  fs::create_directories(ws.ct_dir());
  json manifest;
  manifest["params_hash"] = ckks::to_hex(params.hash);
  manifest["batch_size"] = batch;
  manifest["rows"] = table.rows.size();
  manifest["features"] = table.header;
  manifest["batches"] = json::array();
  const uint64_t seed = g.seed_or(1);
  for (size_t start = 0, k = 0; start < table.rows.size(); start += batch, ++k) {
    const size_t end = std::min(table.rows.size(), start + batch);
    const engine::Samples rows(table.rows.begin() + static_cast<std::ptrdiff_t>(start),
                               table.rows.begin() + static_cast<std::ptrdiff_t>(end));
    const auto enc =
        engine::encrypt_batch(rows, table.header.size(), pk, params, derive_seed(seed, k));
    const fs::path dir = ws.ct_dir() / ("batch_" + std::to_string(k));
    fs::create_directories(dir);
    json files = json::array();
    for (size_t j = 0; j < enc.cts.size(); ++j) {
      const fs::path f = dir / ("x" + std::to_string(j) + ".hect");
      io::write_file(f.string(), io::serialize(enc.cts[j]));
      files.push_back(fs::relative(f, ws.root()).string());
    }
    manifest["batches"].push_back({{"rows", rows.size()}, {"files", files}});
  }
  write_json(ws.ct_dir() / "manifest.json", manifest);
  out << "encrypted " << table.rows.size() << " rows x " << table.header.size()
      << " features into " << manifest["batches"].size() << " batch(es) of up to " << batch
      << " slots\n";
  return kExitOk;
}

// compile ------------------------------------------------------------------

struct CompileArgs {
  std::string model;
  std::string fuse = "on";
  std::string rescale = "eager";
  size_t batch = 0;
};

compiler::CompileOptions compile_options(const std::string& fuse, const std::string& rescale) {
  return {on_off(fuse), rescale == "eager" ? compiler::RescaleMode::kEager
                                           : compiler::RescaleMode::kOff};
}

json circuit_summary(const compiler::CompiledCircuit& c) {
  json counts;
  for (const auto& [kind, n] : c.op_counts()) counts[compiler::to_string(kind)] = n;
  json groups = json::array();
  for (const auto& grp : c.groups) groups.push_back({{"label", grp.label}, {"ops", grp.ops.size()}});
  return {{"model", c.model_name},
          {"depth", c.depth},
          {"entry_level", c.entry_level},
          {"input_level", c.input_level},
          {"rescale", compiler::to_string(c.rescale_mode)},
          {"fused", c.fused},
          {"batch_size", c.packing.batch_size},
          {"ops", c.op_count()},
          {"op_counts", counts},
          {"dispatches", c.groups.size()},
          {"groups", groups},
          {"params_hash", ckks::to_hex(c.params_hash)}};
}

int cmd_compile(const Globals& g, const CompileArgs& a, std::ostream& out) {
  const auto ws = g.ws();
  const auto params = ws.load_params();
  const auto model = resolve_model(ws, a.model, g.seed_or(1));
  const size_t batch = a.batch ? a.batch : params.slot_count();
  const auto c = compiler::compile(model, params, batch, compile_options(a.fuse, a.rescale));
  if (!a.model.empty() && !fs::exists(a.model)) compiler::save_model(model, ws.model().string());
  write_text(ws.root() / "circuit.txt", compiler::dump_circuit(c));
  const json summary = circuit_summary(c);
  write_json(ws.root() / "circuit.json", summary);
  out << "compiled " << c.model_name << ": depth " << c.depth << ", " << c.op_count()
      << " ops in " << c.groups.size() << " dispatches, entry level " << c.entry_level
      << "\n";
  return kExitOk;
}

// infer --------------------------------------------------------------------

struct InferArgs {
  std::string model;
  std::string fuse = "on";
  std::string rescale = "eager";
  std::string packing = "on";
};

json metrics_json(const engine::ExecutionMetrics& m) {
  json counts;
  for (size_t k = 0; k < compiler::kOpKindCount; ++k) {
    counts[compiler::to_string(static_cast<compiler::OpKind>(k))] = m.op_counts[k];
  }
  return {{"e2e_ms", m.e2e_ms},
          {"total_op_ms", static_cast<double>(m.total_op_ns()) / 1e6},
          {"dispatches", m.dispatches},
          {"op_counts", counts},
          {"bytes_processed", m.bytes_processed},
          {"peak_live_bytes", m.peak_live_bytes},
          {"avg_live_bytes", m.avg_live_bytes},
          {"avg_live_ciphertext_bytes", m.avg_live_ciphertext_bytes},
          {"avg_ciphertext_bytes", m.avg_ciphertext_bytes}};
}

int cmd_infer(const Globals& g, const InferArgs& a, std::ostream& out, std::ostream& err) {
  err << kDisclaimer << "\n";
  const auto ws = g.ws();
  const auto params = ws.load_params();
  const auto relin = ws.load_relin_key(params);
  const auto model = resolve_model(ws, a.model, g.seed_or(1));
  const json manifest = read_json(ws.ct_dir() / "manifest.json");
  if (ckks::hash_from_hex(manifest.at("params_hash").get<std::string>()) != params.hash) {
    throw ParamsError("ciphertext manifest was written under different params");
  }
  const size_t batch = manifest.at("batch_size").get<size_t>();
  if (!on_off(a.packing) && batch != 1) {
    throw ValidationError("--batch-packing off runs one sample per ciphertext; "
                          "encrypt with --batch 1");
  }
  for (const auto& b : manifest.at("batches")) {
    for (const auto& f : b.at("files")) {
      const fs::path path = ws.root() / f.get<std::string>();
      if (io::read_header(io::read_file(path.string())).params_hash != params.hash) {
        throw ParamsError(path.string() + " was written under different params");
      }
    }
  }
  const auto circuit =
      compiler::compile(model, params, batch, compile_options(a.fuse, a.rescale));
  const engine::Engine eng(params, relin ? &*relin : nullptr);

  fs::remove_all(ws.out_dir());
  fs::create_directories(ws.out_dir());
  json out_manifest;
  out_manifest["params_hash"] = ckks::to_hex(params.hash);
  out_manifest["rows"] = manifest.at("rows");
  out_manifest["outputs"] = circuit.outputs.size();
  out_manifest["batches"] = json::array();
  json metrics;
  metrics["config"] = {{"fuse", a.fuse}, {"rescale", a.rescale}, {"batch_packing", a.packing}};
  metrics["circuit"] = circuit_summary(circuit);
  metrics["batches"] = json::array();
  double total_ms = 0.0;
  size_t k = 0;
  for (const auto& b : manifest.at("batches")) {
    engine::EncryptedBatch in;
    in.batch_size = b.at("rows").get<size_t>();
    for (const auto& f : b.at("files")) {
      in.cts.push_back(io::parse_ciphertext(
          io::read_file((ws.root() / f.get<std::string>()).string()), params));
    }
    const auto result = eng.execute(circuit, in);
    const fs::path dir = ws.out_dir() / ("batch_" + std::to_string(k++));
    fs::create_directories(dir);
    json files = json::array();
    for (size_t j = 0; j < result.outputs.cts.size(); ++j) {
      const fs::path f = dir / ("y" + std::to_string(j) + ".hect");
      io::write_file(f.string(), io::serialize(result.outputs.cts[j]));
      files.push_back(fs::relative(f, ws.root()).string());
    }
    out_manifest["batches"].push_back({{"rows", in.batch_size}, {"files", files}});
    metrics["batches"].push_back(metrics_json(result.metrics));
    total_ms += result.metrics.e2e_ms;
  }
  metrics["total_e2e_ms"] = total_ms;
  write_json(ws.out_dir() / "manifest.json", out_manifest);
  write_json(ws.out_dir() / "metrics.json", metrics);
  out << "inferred " << manifest.at("rows").get<size_t>() << " rows in " << k
      << " batch(es), " << circuit.groups.size() << " dispatches each, " << total_ms
      << " ms total\n";
  return kExitOk;
}

// decrypt ------------------------------------------------------------------

int cmd_decrypt(const Globals& g, const std::string& output, std::ostream& out,
                std::ostream& err) {
  err << kDisclaimer << "\n";
  const auto ws = g.ws();
  const auto params = ws.load_params();
  const auto sk = ws.load_secret_key(params);
  const json manifest = read_json(ws.out_dir() / "manifest.json");
  io::Table table;
  const size_t outputs = manifest.at("outputs").get<size_t>();
  for (size_t j = 0; j < outputs; ++j) table.header.push_back("score_" + std::to_string(j));
  for (const auto& b : manifest.at("batches")) {
    engine::EncryptedBatch batch;
    batch.batch_size = b.at("rows").get<size_t>();
    for (const auto& f : b.at("files")) {
      batch.cts.push_back(io::parse_ciphertext(
          io::read_file((ws.root() / f.get<std::string>()).string()), params));
    }
    const auto rows = engine::decrypt_batch(batch, sk, params);
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  const fs::path path = output.empty() ? ws.root() / "predictions.csv" : fs::path(output);
  io::write_csv(path.string(), table);
  out << "decrypted " << table.rows.size() << " rows to " << path.string() << "\n";
  return kExitOk;
}

// bench --------------------------------------------------------------------

struct BenchArgs {
  std::string scenario = "all";
  std::string model;
  size_t repetitions = 5;
  size_t warmups = 1;
  size_t samples = 1024;
};

int cmd_bench(const Globals& g, const BenchArgs& a, std::ostream& out) {
  const auto ws = g.ws();
  std::vector<std::string> names;
  if (a.scenario == "all") {
    names = bench::scenarios();
  } else {
    names = {a.scenario};
  }
  std::vector<bench::BenchReport> reports;
  for (const auto& name : names) {
    bench::BenchOptions o;
    o.model = a.model;
    o.repetitions = a.repetitions;
    o.warmups = a.warmups;
    o.samples = a.samples;
    o.seed = g.seed_or(1);
    reports.push_back(bench::run_bench(name, o));
    write_json(ws.reports_dir() / ("bench_" + name + ".json"),
               bench::report_to_json(reports.back()));
    write_text(ws.reports_dir() / ("bench_" + name + ".md"),
               bench::report_markdown({reports.back()}));
  }
  out << bench::report_markdown(reports);
  return kExitOk;
}

// simulate -----------------------------------------------------------------

int cmd_simulate(const Globals& g, const std::string& config_path, const std::string& out_dir,
                 std::ostream& out) {
  const auto ws = g.ws();
  sim::SimConfig config;
  if (config_path.empty()) {
    config.sweep = sim::reference_sweep();
  } else {
    config = sim::load_sim_config(config_path);
  }
  const uint64_t seed = g.seed_or(config.seed);
  const fs::path dir = out_dir.empty() ? ws.reports_dir() : fs::path(out_dir);
  if (config.sweep) {
    const auto result = sim::run_sweep(*config.sweep, seed);
    json rows = json::array();
    for (const auto& r : result.rows) {
      json row = sim::sim_metrics_to_json(r.metrics);
      row["pods"] = r.pods;
      row["offered_utilization"] = r.offered_utilization;
      row.erase("utilization_timeline");
      rows.push_back(row);
    }
    write_json(dir / "sim_sweep.json",
               {{"seed", seed}, {"service_time_s", result.service_time_s}, {"rows", rows}});
    write_text(dir / "sim_table.md", sim::sweep_markdown(result));
    write_text(dir / "sim_curve.csv", sim::sweep_csv(result));
    out << sim::sweep_markdown(result);
    out << "calibrated service time " << result.service_time_s * 1e3 << " ms\n";
    return kExitOk;
  }
  const auto m = sim::run_sim(config.cluster, config.workload, seed, config.options);
  json doc = sim::sim_metrics_to_json(m);
  doc["seed"] = seed;
  write_json(dir / "sim_metrics.json", doc);
  sim::SweepResult single;
  single.rows.push_back({static_cast<size_t>(std::lround(m.mean_pods)), 0.0, m});
  write_text(dir / "sim_table.md", sim::sweep_markdown(single));
  write_text(dir / "sim_curve.csv", sim::sweep_csv(single));
  out << sim::sweep_markdown(single);
  out << "arrived " << m.arrived << ", completed " << m.completed << ", pods " << m.min_pods_seen
      << ".." << m.max_pods_seen << "\n";
  return kExitOk;
}

// report -------------------------------------------------------------------

int cmd_report(const Globals& g, std::ostream& out) {
  const auto ws = g.ws();
  std::vector<bench::BenchReport> reports;
  for (const auto& name : bench::scenarios()) {
    const fs::path p = ws.reports_dir() / ("bench_" + name + ".json");
    if (!fs::exists(p)) continue;
    auto r = bench::report_from_json(read_json(p));
    if (!bench::ratios_consistent(r)) {
      throw ValidationError(p.string() + ": stored ratios disagree with the raw measurements");
    }
    reports.push_back(std::move(r));
  }
  std::string text = "# hewflow report\n\n";
  if (!reports.empty()) text += "## Benchmarks\n\n" + bench::report_markdown(reports) + "\n";
  const fs::path table = ws.reports_dir() / "sim_table.md";
  if (fs::exists(table)) {
    std::ifstream in(table);
    text += "## Cluster simulation\n\n" +
            std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  if (reports.empty() && !fs::exists(table)) {
    throw ValidationError("no bench or simulation results under " + ws.reports_dir().string());
  }
  write_text(ws.reports_dir() / "report.md", text);
  out << text;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hewflow: encrypted inference workflow"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("-w,--workspace", g.workspace,
                 "Workspace directory (default: $HEWFLOW_WORKSPACE or .)");
  app.add_option("--seed", g.seed, "Seed for every random choice");

  KeygenArgs keygen;
  auto* c_keygen = app.add_subcommand("keygen", "Generate params and keys");
  c_keygen->add_option("--depth", keygen.depth, "Rescaling primes above the base prime")
      ->check(CLI::Range(1, 30));
  c_keygen->add_option("--n", keygen.n, "Ring degree (power of two)");
  c_keygen->add_flag("--force", keygen.force, "Overwrite existing keys");

  EncryptArgs encrypt;
  auto* c_encrypt = app.add_subcommand("encrypt", "Encrypt a CSV of samples");
  c_encrypt->add_option("--input", encrypt.input, "CSV with a header row")->required();
  c_encrypt->add_option("--batch", encrypt.batch, "Samples per ciphertext (default: all)");

  const std::vector<std::string> onoff = {"on", "off"};
  const std::vector<std::string> modes = {"eager", "off"};
  CompileArgs compile;
  auto* c_compile = app.add_subcommand("compile", "Compile a model into a circuit");
  c_compile->add_option("--model", compile.model, "model.json path or logistic|mlp|cnn");
  c_compile->add_option("--fuse", compile.fuse)->check(CLI::IsMember(onoff));
  c_compile->add_option("--rescale", compile.rescale)->check(CLI::IsMember(modes));
  c_compile->add_option("--batch", compile.batch, "Batch size for the packing plan");

  InferArgs infer;
  auto* c_infer = app.add_subcommand("infer", "Run encrypted inference");
  c_infer->add_option("--model", infer.model, "model.json path or logistic|mlp|cnn");
  c_infer->add_option("--fuse", infer.fuse)->check(CLI::IsMember(onoff));
  c_infer->add_option("--rescale", infer.rescale)->check(CLI::IsMember(modes));
  c_infer->add_option("--batch-packing", infer.packing)->check(CLI::IsMember(onoff));

  std::string decrypt_output;
  auto* c_decrypt = app.add_subcommand("decrypt", "Decrypt inference outputs to CSV");
  c_decrypt->add_option("--output", decrypt_output, "CSV path (default: predictions.csv)");

  BenchArgs bench_args;
  auto* c_bench = app.add_subcommand("bench", "Paired baseline/optimized benchmarks");
  std::vector<std::string> scenario_names = bench::scenarios();
  scenario_names.push_back("all");
  c_bench->add_option("--scenario", bench_args.scenario)->check(CLI::IsMember(scenario_names));
  c_bench->add_option("--model", bench_args.model, "logistic|mlp|cnn");
  c_bench->add_option("--reps", bench_args.repetitions, "Timed repetitions (>= 5)");
  c_bench->add_option("--warmups", bench_args.warmups, "Untimed warm-up runs");
  c_bench->add_option("--samples", bench_args.samples, "Samples per run");

  std::string sim_config, sim_out;
  auto* c_simulate = app.add_subcommand("simulate", "Simulate the autoscaled cluster");
  c_simulate->add_option("--config", sim_config, "Simulation config JSON");
  c_simulate->add_option("--out", sim_out, "Output directory (default: reports/)");

  auto* c_report = app.add_subcommand("report", "Collect bench and simulation results");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*c_keygen) return cmd_keygen(g, keygen, out, err);
    if (*c_encrypt) return cmd_encrypt(g, encrypt, out, err);
    if (*c_compile) return cmd_compile(g, compile, out);
    if (*c_infer) return cmd_infer(g, infer, out, err);
    if (*c_decrypt) return cmd_decrypt(g, decrypt_output, out, err);
    if (*c_bench) return cmd_bench(g, bench_args, out);
    if (*c_simulate) return cmd_simulate(g, sim_config, sim_out, out);
    if (*c_report) return cmd_report(g, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParamsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParams;
  } catch (const DepthError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDepth;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace hewflow::cli
