#pragma once

// Dispatcher -> workers -> pre-exit queue -> sink.
//
// The dispatcher reads each message, pulls out the machine id (and the
// timestamp, for the watermark clock) from fixed offsets and hands the raw
// bytes to worker `machine % workers`. Workers parse the readings one at a
// time and push each value through its sensor chain. Anomalies wait in the
// pre-exit queue until the watermark shows that no worker can still
// produce an earlier one.

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "streamad/chain.hpp"
#include "streamad/core.hpp"
#include "streamad/spsc_queue.hpp"
#include "streamad/transport.hpp"
#include "streamad/watermark.hpp"
#include "streamad/window.hpp"

namespace streamad {

inline std::uint32_t route(MachineId machine, std::uint32_t workers) noexcept {
  return machine % workers;
}

struct PendingAnomaly {
  Anomaly anomaly;
  GroupId group_id = 0;
  std::int64_t ingest_ns = 0;
};

/// (timestamp, machine, property, group) ordering of pending anomalies.
bool order_before(const PendingAnomaly& a, const PendingAnomaly& b) noexcept;

/// Concurrent pushes from workers, exclusive pops by the flusher.
class PreExitQueue {
 public:
  void push(PendingAnomaly pending);
  /// Pops every anomaly with timestamp < bound, in order.
  void pop_below(Timestamp bound, std::vector<PendingAnomaly>& out);
  std::size_t size() const;

 private:
  struct Later {
    bool operator()(const PendingAnomaly& a, const PendingAnomaly& b) const noexcept {
      return order_before(b, a);
    }
  };

  mutable std::mutex mu_;
  std::priority_queue<PendingAnomaly, std::vector<PendingAnomaly>, Later> heap_;
};

std::int64_t monotonic_ns() noexcept;

/// Assigns consecutive anomaly ids at emission and records latency.
class Emitter {
 public:
  explicit Emitter(AnomalySink& sink) : sink_(sink) {}

  void emit(const PendingAnomaly& pending);

  std::uint64_t emitted() const;
  double latency_sum_ms() const;

 private:
  mutable std::mutex mu_;
  AnomalySink& sink_;
  std::uint64_t next_id_ = 0;
  double latency_sum_ms_ = 0.0;
};

/// Emits every pending anomaly below `bound`; returns how many.
std::size_t flush(PreExitQueue& queue, Timestamp bound, Emitter& emitter);

struct RunReport {
  std::uint64_t messages = 0;
  TriggerCounters triggers;
  std::uint64_t anomalies = 0;
  std::uint64_t parse_errors = 0;
  std::uint64_t bytes = 0;
  double wall_ms = 0.0;
  double latency_sum_ms = 0.0;

  std::uint64_t windows() const noexcept { return triggers.windows(); }
  /// Mean anomaly latency, or nullopt without anomalies.
  std::optional<double> mean_latency_ms() const noexcept;
  double throughput_mb_s() const noexcept;
};

/// `key=value` lines.
std::string format_report(const RunReport& report);

struct Envelope {
  std::string_view bytes;
  std::int64_t ingest_ns = 0;
  bool end = false;
};

struct ScheduleTrace {
  std::uint64_t steps = 0;
  std::uint64_t fingerprint = 0;  // hash of the actor chosen at every step
};

class Engine {
 public:
  Engine(MetadataMap metadata, const RunConfig& config);

  const RunConfig& config() const noexcept { return config_; }
  const MetadataMap& metadata() const noexcept { return metadata_; }
  const WindowStore& store() const noexcept { return store_; }

  /// Runs the dispatcher on the calling thread plus `worker_count` worker
  /// threads and a flusher thread, until the source is exhausted and every
  /// pending anomaly is emitted.
  RunReport run(MessageSource& source, AnomalySink& sink);

  /// Same engine in a single context: a seeded scheduler picks which actor
  /// (dispatcher, a worker, the flusher) takes the next step.
  RunReport run_scheduled(MessageSource& source, AnomalySink& sink, std::uint64_t seed,
                          ScheduleTrace* trace = nullptr);

  /// Runs the full pipeline `passes` times over the first `groups` messages
  /// of `source`, discarding output, then restores the initial state.
  void warmup(MessageSource& source, std::uint32_t groups, std::uint32_t passes);

  /// Clears all window and reuse state.
  void reset();
  bool pristine() const;

 private:
  class Run;

  MetadataMap metadata_;
  RunConfig config_;
  WindowStore store_;
};

}  // namespace streamad
