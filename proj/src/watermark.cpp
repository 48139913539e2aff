#include "streamad/watermark.hpp"

#include <algorithm>

namespace streamad {

Timestamp compute_flush_bound(std::span<const WorkerMark> marks, Timestamp dispatcher_clock,
                              bool sentinel_mode) noexcept {
  Timestamp bound = kTimestampMax;
  for (const auto& m : marks) {
    Timestamp contribution = m.idle ? (sentinel_mode ? kTimestampMax : dispatcher_clock) : m.timestamp;
    bound = std::min(bound, contribution);
  }
  return bound;
}

Watermark::Watermark(std::uint32_t workers) : slots_(workers) {}

void Watermark::advance_clock(Timestamp ts) noexcept {
  clock_.store(ts, std::memory_order_release);
}

void Watermark::note_enqueued(std::uint32_t worker) noexcept {
  slots_[worker].enqueued.fetch_add(1, std::memory_order_acq_rel);
}

void Watermark::publish(std::uint32_t worker, Timestamp ts) noexcept {
  auto& slot = slots_[worker];
  slot.done.store(ts, std::memory_order_release);
  slot.finished.fetch_add(1, std::memory_order_acq_rel);
}

void Watermark::publish_unchanged(std::uint32_t worker) noexcept {
  slots_[worker].finished.fetch_add(1, std::memory_order_acq_rel);
}

Timestamp Watermark::published(std::uint32_t worker) const noexcept {
  return slots_[worker].done.load(std::memory_order_acquire);
}

void Watermark::Snapshot::read_worker(std::uint32_t worker) noexcept {
  const auto& slot = wm_->slots_[worker];
  std::uint64_t enqueued = slot.enqueued.load(std::memory_order_acquire);
  std::uint64_t finished = slot.finished.load(std::memory_order_acquire);
  marks_[worker].idle = finished >= enqueued;
  marks_[worker].timestamp = slot.done.load(std::memory_order_acquire);
}

Timestamp Watermark::flush_bound(bool sentinel_mode) const noexcept {
  Snapshot snap(*this);
  snap.read_clock();
  for (std::uint32_t w = 0; w < workers(); ++w) snap.read_worker(w);
  return snap.bound(sentinel_mode);
}

}  // namespace streamad
