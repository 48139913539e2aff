#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "streamad/clustering.hpp"
#include "streamad/generator.hpp"
#include "streamad/modeling.hpp"
#include "streamad/oracle.hpp"
#include "streamad/pipeline.hpp"
#include "streamad/wire.hpp"

namespace py = pybind11;
using namespace streamad;

namespace {

py::dict report_dict(const RunReport& r) {
  py::dict d;
  d["messages"] = r.messages;
  d["windows"] = r.windows();
  d["inout"] = r.triggers.inout;
  d["k1"] = r.triggers.k1;
  d["lowk"] = r.triggers.lowk;
  d["full"] = r.triggers.full;
  d["sorted"] = r.triggers.sorted;
  d["anomalies"] = r.anomalies;
  d["parse_errors"] = r.parse_errors;
  d["bytes"] = r.bytes;
  d["wall_ms"] = r.wall_ms;
  d["latency_ms"] = r.mean_latency_ms();
  return d;
}

py::dict counts_dict(const TransitionCounts& counts, std::span<const ClusterIndex> seq) {
  py::dict d;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    ClusterPair p{seq[i], seq[i + 1]};
    d[py::make_tuple(p.first, p.second)] = counts.pair_count(p);
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_streamad, m) {
  m.doc() = "Streaming anomaly detection over machine sensor data";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("window_size", &RunConfig::window_size)
      .def_readwrite("transition_count", &RunConfig::transition_count)
      .def_readwrite("threshold", &RunConfig::threshold)
      .def_readwrite("max_kmeans_iterations", &RunConfig::max_kmeans_iterations)
      .def_readwrite("worker_count", &RunConfig::worker_count)
      .def_readwrite("warmup_groups", &RunConfig::warmup_groups)
      .def_readwrite("warmup_passes", &RunConfig::warmup_passes)
      .def_readwrite("synchronized_output", &RunConfig::synchronized_output)
      .def_readwrite("force_full", &RunConfig::force_full)
      .def_readwrite("sorted_sweep", &RunConfig::sorted_sweep)
      .def_readwrite("compat_sentinel_watermark", &RunConfig::compat_sentinel_watermark);

  py::class_<Anomaly>(m, "Anomaly")
      .def_readonly("anomaly_id", &Anomaly::anomaly_id)
      .def_readonly("machine_id", &Anomaly::machine_id)
      .def_readonly("property_id", &Anomaly::property_id)
      .def_readonly("timestamp", &Anomaly::timestamp)
      .def_readonly("probability", &Anomaly::probability)
      .def("__eq__", [](const Anomaly& a, const Anomaly& b) { return a == b; })
      .def("__str__", &format_anomaly)
      .def("__repr__", [](const Anomaly& a) { return "<Anomaly " + format_anomaly(a) + ">"; });

  m.def("validate_config", [](const RunConfig& c) { validate_config(c); });

  m.def(
      "parse_group",
      [](const std::string& message) {
        ObservationGroup g = parse_group_reference(message);
        py::dict d;
        d["group_id"] = g.group_id;
        d["machine_id"] = g.machine_id;
        d["timestamp"] = g.timestamp;
        py::list readings;
        for (const auto& r : g.readings) readings.append(py::make_tuple(r.property_id, r.value));
        d["readings"] = readings;
        return d;
      },
      py::arg("message"));

  m.def(
      "serialize_group",
      [](GroupId group_id, MachineId machine_id, Timestamp ts,
         const std::vector<std::pair<PropertyId, double>>& readings) {
        ObservationGroup g{group_id, machine_id, ts, {}};
        for (auto [p, v] : readings) g.readings.push_back({p, v});
        return serialize_group(g);
      },
      py::arg("group_id"), py::arg("machine_id"), py::arg("timestamp"), py::arg("readings"));

  m.def(
      "kmeans",
      [](const std::vector<double>& values, std::uint32_t k, std::uint32_t max_iterations) {
        if (k == 0 || k > values.size()) throw py::value_error("k must be in [1, len(values)]");
        auto r = kmeans_full(values, k, max_iterations);
        return py::make_tuple(r.centroids, r.assignments, r.iterations);
      },
      py::arg("values"), py::arg("k"), py::arg("max_iterations") = 50,
      "Returns (centroids, assignments, iterations).");

  m.def(
      "count_transitions",
      [](const std::vector<ClusterIndex>& seq) { return counts_dict(count_transitions(seq), seq); },
      py::arg("sequence"));

  m.def(
      "detect",
      [](const std::vector<ClusterIndex>& seq, std::uint32_t n, double threshold) {
        return detect(seq, count_transitions(seq), n, threshold);
      },
      py::arg("sequence"), py::arg("transitions"), py::arg("threshold"),
      "Composed probability of the last N transitions when below the threshold, else None.");

  m.def(
      "generate",
      [](std::uint32_t machines, std::uint32_t sensors, std::uint32_t groups, std::uint64_t seed,
         std::uint32_t k_min, std::uint32_t k_max) {
        GeneratorSpec spec;
        spec.machines = machines;
        spec.sensors_per_machine = sensors;
        spec.groups = groups;
        spec.seed = seed;
        spec.k_min = k_min;
        spec.k_max = k_max;
        auto wl = generate(spec);
        return py::make_tuple(py::bytes(wl.corpus), serialize_metadata(wl.metadata));
      },
      py::arg("machines") = 10, py::arg("sensors") = 10, py::arg("groups") = 2000,
      py::arg("seed") = 1, py::arg("k_min") = 1, py::arg("k_max") = 8,
      "Returns (corpus bytes, metadata text).");

  m.def(
      "run",
      [](const std::string& corpus, const std::string& metadata, const RunConfig& config) {
        validate_config(config);
        MetadataMap meta = load_metadata(metadata);
        CorpusSource source(corpus);
        MemorySink sink;
        RunReport r;
        {
          py::gil_scoped_release release;
          Engine engine(meta, config);
          engine.warmup(source, config.warmup_groups, config.warmup_passes);
          source.rewind();
          r = engine.run(source, sink);
        }
        return py::make_tuple(sink.anomalies, report_dict(r));
      },
      py::arg("corpus"), py::arg("metadata"), py::arg("config") = RunConfig{},
      "Runs the engine. Returns (anomalies, report).");

  m.def(
      "oracle",
      [](const std::string& corpus, const std::string& metadata, const RunConfig& config) {
        validate_config(config);
        MetadataMap meta = load_metadata(metadata);
        CorpusSource source(corpus);
        return oracle_run(source.messages(), meta, config);
      },
      py::arg("corpus"), py::arg("metadata"), py::arg("config") = RunConfig{},
      "Straightforward reference implementation of the detector.");
}
