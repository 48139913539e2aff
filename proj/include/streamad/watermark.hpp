#pragma once

// Flush bound for the pre-exit queue.
//
// Each worker publishes the timestamp of the last message it finished. A
// worker with nothing in flight (every message routed to it has finished)
// is idle; instead of a fixed maximum it contributes the dispatcher clock,
// the timestamp of the last dispatched message. Input timestamps never
// decrease, so no message reaching an idle worker later can carry an
// earlier timestamp. The paper-style maximum sentinel remains available for
// measurement parity; it is unsafe when a message is in flight to a worker
// that was just observed idle.

#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "streamad/core.hpp"

namespace streamad {

inline constexpr Timestamp kTimestampMin = std::numeric_limits<Timestamp>::min();
inline constexpr Timestamp kTimestampMax = std::numeric_limits<Timestamp>::max();

struct WorkerMark {
  bool idle = false;
  Timestamp timestamp = kTimestampMin;
};

/// min over workers of the published timestamp, idle workers contributing
/// the dispatcher clock (or the maximum timestamp in sentinel mode).
Timestamp compute_flush_bound(std::span<const WorkerMark> marks, Timestamp dispatcher_clock,
                              bool sentinel_mode = false) noexcept;

class Watermark {
 public:
  explicit Watermark(std::uint32_t workers);

  // Dispatcher side: advance the clock before routing a message, count the
  // message after it is enqueued.
  void advance_clock(Timestamp ts) noexcept;
  void note_enqueued(std::uint32_t worker) noexcept;

  // Worker side, wait-free. Called after all anomalies of the message are
  // in the pre-exit queue.
  void publish(std::uint32_t worker, Timestamp ts) noexcept;
  /// Marks a message finished without moving the timestamp (e.g. a message
  /// that failed to parse).
  void publish_unchanged(std::uint32_t worker) noexcept;

  Timestamp dispatcher_clock() const noexcept { return clock_.load(std::memory_order_acquire); }
  Timestamp published(std::uint32_t worker) const noexcept;

  /// Snapshot read in the order the safety argument needs: the clock first,
  /// then per worker the enqueued count, the finished count and the
  /// published timestamp. Exposed step by step for the scheduler harness.
  class Snapshot {
   public:
    explicit Snapshot(const Watermark& wm) : wm_(&wm), marks_(wm.slots_.size()) {}
    void read_clock() noexcept { clock_ = wm_->clock_.load(std::memory_order_acquire); }
    void read_worker(std::uint32_t worker) noexcept;
    Timestamp bound(bool sentinel_mode) const noexcept {
      return compute_flush_bound(marks_, clock_, sentinel_mode);
    }
    std::span<const WorkerMark> marks() const noexcept { return marks_; }

   private:
    const Watermark* wm_;
    std::vector<WorkerMark> marks_;
    Timestamp clock_ = kTimestampMin;
  };

  Timestamp flush_bound(bool sentinel_mode = false) const noexcept;
  std::uint32_t workers() const noexcept { return static_cast<std::uint32_t>(slots_.size()); }

 private:
  struct alignas(64) Slot {
    std::atomic<std::uint64_t> enqueued{0};
    std::atomic<std::uint64_t> finished{0};
    std::atomic<Timestamp> done{kTimestampMin};
  };

  std::vector<Slot> slots_;
  alignas(64) std::atomic<Timestamp> clock_{kTimestampMin};
};

}  // namespace streamad
