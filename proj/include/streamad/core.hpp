#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streamad {

using MachineId = std::uint32_t;
using PropertyId = std::uint32_t;
using GroupId = std::uint64_t;
/// Logical milliseconds.
using Timestamp = std::int64_t;
using ClusterIndex = std::uint32_t;

struct SensorKey {
  MachineId machine_id = 0;
  PropertyId property_id = 0;

  friend auto operator<=>(const SensorKey&, const SensorKey&) = default;
};

struct Reading {
  PropertyId property_id = 0;
  double value = 0.0;

  friend bool operator==(const Reading&, const Reading&) = default;
};

/// One timestamped message carrying every reading of one machine.
struct ObservationGroup {
  GroupId group_id = 0;
  MachineId machine_id = 0;
  Timestamp timestamp = 0;
  std::vector<Reading> readings;  // strictly ascending property_id

  friend bool operator==(const ObservationGroup&, const ObservationGroup&) = default;
};

struct SensorMetadata {
  std::uint32_t cluster_count = 1;
  bool stateful = true;

  friend bool operator==(const SensorMetadata&, const SensorMetadata&) = default;
};

using MetadataMap = std::map<SensorKey, SensorMetadata>;

struct RunConfig {
  std::uint32_t window_size = 10;
  std::uint32_t transition_count = 5;
  double threshold = 0.005;
  std::uint32_t max_kmeans_iterations = 50;
  std::uint32_t worker_count = 1;
  std::uint32_t warmup_groups = 5000;
  std::uint32_t warmup_passes = 3;
  bool synchronized_output = true;

  // Engine knobs that have no bearing on results.
  bool force_full = false;
  bool sorted_sweep = false;
  bool compat_sentinel_watermark = false;
  std::uint32_t queue_capacity = 1024;
  std::uint32_t flush_interval_us = 1000;
};

/// Emitted in global (timestamp, machine_id, property_id) order.
struct Anomaly {
  std::uint64_t anomaly_id = 0;
  MachineId machine_id = 0;
  PropertyId property_id = 0;
  Timestamp timestamp = 0;
  double probability = 0.0;

  friend bool operator==(const Anomaly&, const Anomaly&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DuplicateDefinitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ConfigErrorKind {
  kWindowTooSmall,
  kTransitionCountTooSmall,
  kThresholdOutOfRange,
  kNoWorkers,
  kNoKMeansIterations,
  kQueueCapacity,
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}

  ConfigErrorKind kind() const noexcept { return kind_; }

 private:
  ConfigErrorKind kind_;
};

/// Parses the `machine,sensor,clusters,stateful` text format. Lines starting
/// with '#' and blank lines are ignored.
MetadataMap load_metadata(std::string_view source);
MetadataMap load_metadata_file(const std::string& path);
std::string serialize_metadata(const MetadataMap& metadata);

/// Returns the metadata of a stateful sensor, or nullopt when the sensor is
/// unknown or non-stateful.
std::optional<SensorMetadata> stateful_sensor(const MetadataMap& metadata, SensorKey key);

const RunConfig& validate_config(const RunConfig& cfg);

/// `anomaly_id\tmachine_id\tproperty_id\ttimestamp\tprobability` with the
/// probability printed to 12 significant digits, no trailing newline.
std::string format_anomaly(const Anomaly& anomaly);

/// Canonical key for value identity: equal reals map to equal keys, with
/// -0.0 folded onto +0.0.
inline std::uint64_t value_key(double v) noexcept {
  if (v == 0.0) v = 0.0;
  return std::bit_cast<std::uint64_t>(v);
}

inline bool same_value(double a, double b) noexcept { return a == b; }

}  // namespace streamad
