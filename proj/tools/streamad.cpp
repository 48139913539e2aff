// streamad: run, profile, bench, generate, oracle.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "streamad/generator.hpp"
#include "streamad/oracle.hpp"
#include "streamad/pipeline.hpp"

using namespace streamad;

namespace {

struct Common {
  std::string input;
  std::string meta;
  std::string output;
  RunConfig config;
  std::uint64_t seed = 1;
};

void add_common(CLI::App& cmd, Common& c) {
  cmd.add_option("--input", c.input, "Concatenated wire-format messages")->required();
  cmd.add_option("--meta", c.meta, "Sensor metadata file")->required();
  cmd.add_option("--output", c.output, "Anomaly file (default: standard output)");
  cmd.add_option("--window", c.config.window_size, "Window size W")->capture_default_str();
  cmd.add_option("--transitions", c.config.transition_count, "Transitions N")->capture_default_str();
  cmd.add_option("--threshold", c.config.threshold, "Anomaly threshold")->capture_default_str();
  cmd.add_option("--workers", c.config.worker_count, "Worker threads")->capture_default_str();
  cmd.add_option("--max-iters", c.config.max_kmeans_iterations, "Lloyd iteration cap")
      ->capture_default_str();
  cmd.add_flag("--sync,!--no-sync", c.config.synchronized_output, "Globally ordered output");
  cmd.add_flag("--force-full", c.config.force_full, "Disable IN/OUT, K1 and LowK");
  cmd.add_flag("--sorted-sweep", c.config.sorted_sweep, "Sorted-window K-means sweep");
  cmd.add_option("--seed", c.seed, "Seed (accepted for symmetry; runs are deterministic)");
  cmd.add_option("--warmup-groups", c.config.warmup_groups, "Messages replayed during warmup")
      ->capture_default_str();
  cmd.add_option("--warmup-passes", c.config.warmup_passes, "Warmup passes")->capture_default_str();
  cmd.add_flag("--compat-sentinel-watermark", c.config.compat_sentinel_watermark,
               "Idle workers contribute the maximum timestamp");
}

struct Loaded {
  MetadataMap metadata;
  std::unique_ptr<CorpusSource> source;
};

Loaded load(const Common& c) {
  validate_config(c.config);
  Loaded l;
  l.metadata = load_metadata_file(c.meta);
  l.source = std::make_unique<CorpusSource>(CorpusSource::from_file(c.input));
  return l;
}

RunReport run_once(const Common& c, Loaded& l, AnomalySink& sink) {
  Engine engine(l.metadata, c.config);
  engine.warmup(*l.source, c.config.warmup_groups, c.config.warmup_passes);
  l.source->rewind();
  return engine.run(*l.source, sink);
}

int cmd_run(const Common& c) {
  Loaded l = load(c);
  RunReport r;
  if (c.output.empty()) {
    StreamSink sink(std::cout);
    r = run_once(c, l, sink);
    std::cerr << format_report(r);
  } else {
    FileSink sink(c.output);
    r = run_once(c, l, sink);
    std::cout << format_report(r);
  }
  return 0;
}

std::string percent(std::uint64_t part, std::uint64_t total) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", total == 0 ? 0.0 : 100.0 * part / total);
  return buf;
}

int cmd_profile(const Common& c) {
  Loaded l = load(c);
  NullSink sink;
  RunReport r = run_once(c, l, sink);
  std::size_t machines = 0;
  {
    std::vector<bool> seen;
    for (const auto& [key, meta] : l.metadata) {
      if (key.machine_id >= seen.size()) seen.resize(key.machine_id + 1);
      if (!seen[key.machine_id]) ++machines;
      seen[key.machine_id] = true;
    }
  }
  const auto& t = r.triggers;
  const std::uint64_t total = r.windows();
  std::printf("%-18s %14s %9s %9s %9s %9s %9s\n", "machines/window", "total_windows", "IN/OUT", "K1",
              "LowK", "FULL", "SORTED");
  char label[32];
  std::snprintf(label, sizeof label, "%zu / %u", machines, c.config.window_size);
  std::printf("%-18s %14llu %9s %9s %9s %9s %9s\n", label, static_cast<unsigned long long>(total),
              percent(t.inout, total).c_str(), percent(t.k1, total).c_str(),
              percent(t.lowk, total).c_str(), percent(t.full, total).c_str(),
              percent(t.sorted, total).c_str());
  return 0;
}

int cmd_bench(const Common& c, int runs) {
  if (runs < 1) throw CLI::ValidationError("--runs", "must be at least 1");
  Loaded l = load(c);
  double mb_s = 0.0, latency = 0.0;
  int latency_runs = 0;
  for (int i = 0; i < runs; ++i) {
    NullSink sink;
    l.source->rewind();
    RunReport r = run_once(c, l, sink);
    auto lat = r.mean_latency_ms();
    std::printf("run %d: %.3f MB/s, latency %s ms, wall %.3f ms, anomalies %llu\n", i + 1,
                r.throughput_mb_s(), lat ? std::to_string(*lat).c_str() : "n/a", r.wall_ms,
                static_cast<unsigned long long>(r.anomalies));
    mb_s += r.throughput_mb_s();
    if (lat) {
      latency += *lat;
      ++latency_runs;
    }
  }
  std::printf("throughput_mb_s=%.3f\n", mb_s / runs);
  if (latency_runs == 0) {
    std::printf("latency_ms=n/a\n");
  } else {
    std::printf("latency_ms=%.3f\n", latency / latency_runs);
  }
  return 0;
}

int cmd_oracle(const Common& c) {
  Loaded l = load(c);
  auto anomalies = oracle_run(l.source->messages(), l.metadata, c.config);
  std::string text = format_anomalies(anomalies);
  if (c.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.output, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("failed writing output file " + c.output);
  }
  return 0;
}

struct GenerateOptions {
  GeneratorSpec spec;
  std::string model = "mixed";
  std::uint32_t period = 3;
  std::uint32_t alphabet = 2;
  double value = 1.0;
  double spike_rate = 0.01;
  std::string output;
  std::string meta;
};

int cmd_generate(GenerateOptions& g) {
  auto alphabet_of = [](std::uint32_t n) {
    std::vector<double> a;
    for (std::uint32_t i = 0; i < n; ++i) a.push_back(1.0 + 2.5 * i);
    return a;
  };
  if (g.model == "constant") {
    g.spec.model = ValueModel::constant_of(g.value);
  } else if (g.model == "cyclic") {
    g.spec.model = ValueModel::cyclic(alphabet_of(g.period));
  } else if (g.model == "uniform") {
    g.spec.model = ValueModel::uniform(alphabet_of(g.alphabet));
  } else if (g.model == "spike") {
    g.spec.model = ValueModel::spike(g.value, g.value + 500.0, g.spike_rate);
  }
  GeneratedWorkload wl = generate(g.spec);
  std::ofstream corpus(g.output, std::ios::binary | std::ios::trunc);
  corpus << wl.corpus;
  std::ofstream meta(g.meta, std::ios::binary | std::ios::trunc);
  meta << serialize_metadata(wl.metadata);
  if (!corpus || !meta) throw std::runtime_error("failed writing generated files");
  std::printf("messages=%llu\nbytes=%zu\nsensors=%zu\n",
              static_cast<unsigned long long>(g.spec.groups) * g.spec.machines, wl.corpus.size(),
              wl.metadata.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming anomaly detection over machine sensor data"};
  app.require_subcommand(1);

  Common run_opts, profile_opts, bench_opts, oracle_opts;
  auto* run = app.add_subcommand("run", "Run the engine and write anomalies");
  add_common(*run, run_opts);
  auto* profile = app.add_subcommand("profile", "Share of windows per clustering trigger");
  add_common(*profile, profile_opts);
  auto* bench = app.add_subcommand("bench", "Throughput and latency over repeated runs");
  add_common(*bench, bench_opts);
  int runs = 5;
  bench->add_option("--runs", runs, "Repetitions")->capture_default_str();
  auto* oracle = app.add_subcommand("oracle", "Reference implementation");
  add_common(*oracle, oracle_opts);

  GenerateOptions gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic corpus and metadata");
  generate_cmd->add_option("--output", gen.output, "Corpus path")->required();
  generate_cmd->add_option("--meta", gen.meta, "Metadata path")->required();
  generate_cmd->add_option("--machines", gen.spec.machines)->capture_default_str();
  generate_cmd->add_option("--sensors", gen.spec.sensors_per_machine, "Sensors per machine")
      ->capture_default_str();
  generate_cmd->add_option("--groups", gen.spec.groups, "Groups per machine")->capture_default_str();
  generate_cmd->add_option("--seed", gen.spec.seed)->capture_default_str();
  generate_cmd->add_option("--model", gen.model)
      ->check(CLI::IsMember({"mixed", "constant", "cyclic", "uniform", "spike"}))
      ->capture_default_str();
  generate_cmd->add_option("--period", gen.period, "Cyclic period")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--alphabet", gen.alphabet, "Uniform alphabet size")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_option("--value", gen.value, "Constant or spike base value");
  generate_cmd->add_option("--spike-rate", gen.spike_rate)->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--k-min", gen.spec.k_min)->capture_default_str();
  generate_cmd->add_option("--k-max", gen.spec.k_max)->capture_default_str();
  generate_cmd->add_option("--stateless-fraction", gen.spec.stateless_fraction)
      ->check(CLI::Range(0.0, 1.0));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts);
    if (*profile) return cmd_profile(profile_opts);
    if (*bench) return cmd_bench(bench_opts, runs);
    if (*oracle) return cmd_oracle(oracle_opts);
    if (*generate_cmd) return cmd_generate(gen);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
