#include "streamad/core.hpp"

#include <array>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace streamad {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line, std::size_t column, const char* name) {
  field = trim(field);
  T out{};
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError("metadata line " + std::to_string(line) + ": invalid " + name + " '" +
                         std::string(field) + "'",
                     line, column);
  }
  return out;
}

}  // namespace

MetadataMap load_metadata(std::string_view source) {
  MetadataMap out;
  std::size_t line_no = 0;
  while (!source.empty()) {
    ++line_no;
    auto nl = source.find('\n');
    std::string_view line = source.substr(0, nl);
    source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);

    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    std::array<std::string_view, 4> fields;
    std::array<std::size_t, 4> columns{};
    std::size_t count = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (count == fields.size()) {
          throw ParseError("metadata line " + std::to_string(line_no) + ": expected 4 fields",
                           line_no, i + 1);
        }
        columns[count] = start + 1;
        fields[count++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (count != fields.size()) {
      throw ParseError("metadata line " + std::to_string(line_no) + ": expected 4 fields",
                       line_no, line.size() + 1);
    }

    SensorKey key{parse_field<MachineId>(fields[0], line_no, columns[0], "machine id"),
                  parse_field<PropertyId>(fields[1], line_no, columns[1], "sensor id")};
    auto clusters = parse_field<std::int64_t>(fields[2], line_no, columns[2], "cluster count");
    auto stateful = parse_field<int>(fields[3], line_no, columns[3], "stateful flag");
    if (stateful != 0 && stateful != 1) {
      throw ParseError("metadata line " + std::to_string(line_no) + ": stateful must be 0 or 1",
                       line_no, columns[3]);
    }
    if (clusters < 1 || clusters > std::numeric_limits<std::uint32_t>::max()) {
      throw DomainError("metadata line " + std::to_string(line_no) + ": cluster count " +
                        std::to_string(clusters) + " is not >= 1");
    }
    auto [it, inserted] =
        out.emplace(key, SensorMetadata{static_cast<std::uint32_t>(clusters), stateful == 1});
    if (!inserted) {
      throw DuplicateDefinitionError("metadata line " + std::to_string(line_no) +
                                     ": duplicate definition of sensor " +
                                     std::to_string(key.machine_id) + "," +
                                     std::to_string(key.property_id));
    }
  }
  return out;
}

MetadataMap load_metadata_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open metadata file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_metadata(buf.str());
}

std::string serialize_metadata(const MetadataMap& metadata) {
  std::string out;
  for (const auto& [key, meta] : metadata) {
    out += std::to_string(key.machine_id);
    out += ',';
    out += std::to_string(key.property_id);
    out += ',';
    out += std::to_string(meta.cluster_count);
    out += meta.stateful ? ",1\n" : ",0\n";
  }
  return out;
}

std::optional<SensorMetadata> stateful_sensor(const MetadataMap& metadata, SensorKey key) {
  auto it = metadata.find(key);
  if (it == metadata.end() || !it->second.stateful) return std::nullopt;
  return it->second;
}

const RunConfig& validate_config(const RunConfig& cfg) {
  if (cfg.window_size < 2) {
    throw ConfigError(ConfigErrorKind::kWindowTooSmall, "window size must be at least 2");
  }
  if (cfg.transition_count < 1) {
    throw ConfigError(ConfigErrorKind::kTransitionCountTooSmall,
                      "transition count must be at least 1");
  }
  // Also rejects NaN.
  if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0)) {
    throw ConfigError(ConfigErrorKind::kThresholdOutOfRange, "threshold must lie in (0, 1]");
  }
  if (cfg.worker_count < 1) {
    throw ConfigError(ConfigErrorKind::kNoWorkers, "worker count must be at least 1");
  }
  if (cfg.max_kmeans_iterations < 1) {
    throw ConfigError(ConfigErrorKind::kNoKMeansIterations,
                      "max k-means iterations must be at least 1");
  }
  if (cfg.queue_capacity < 1) {
    throw ConfigError(ConfigErrorKind::kQueueCapacity, "queue capacity must be at least 1");
  }
  return cfg;
}

std::string format_anomaly(const Anomaly& a) {
  char buf[160];
  int n = std::snprintf(buf, sizeof buf, "%" PRIu64 "\t%" PRIu32 "\t%" PRIu32 "\t%" PRId64 "\t%.12g",
                        a.anomaly_id, a.machine_id, a.property_id, a.timestamp, a.probability);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace streamad
