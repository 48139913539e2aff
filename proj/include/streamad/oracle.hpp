#pragma once

// Straight-line reference for the whole query: validating parser, plain
// per-sensor deques, Lloyd from scratch on every full window, transition
// counts from scratch, detection. Shares only the leaf math with the engine.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streamad/core.hpp"

namespace streamad {

/// Anomalies in (timestamp, machine, property) order with ids assigned.
/// Any parse error propagates.
std::vector<Anomaly> oracle_run(std::span<const std::string_view> messages,
                                const MetadataMap& metadata, const RunConfig& config);

/// One formatted line per anomaly, newline terminated.
std::string format_anomalies(std::span<const Anomaly> anomalies);

}  // namespace streamad
