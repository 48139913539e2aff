#pragma once

#include <atomic>
#include <bit>
#include <cstddef>
#include <new>
#include <optional>
#include <vector>

namespace streamad {

/// Bounded single-producer single-consumer ring. The blocking variants park
/// on the index atomics, so a full queue applies backpressure to the
/// producer without spinning.
template <typename T>
class SpscQueue {
 public:
  explicit SpscQueue(std::size_t capacity)
      : capacity_(capacity), slots_(std::bit_ceil(capacity + 1)), mask_(slots_.size() - 1) {}

  SpscQueue(const SpscQueue&) = delete;
  SpscQueue& operator=(const SpscQueue&) = delete;

  bool try_push(const T& item) {
    std::size_t tail = tail_.load(std::memory_order_relaxed);
    if (tail - head_.load(std::memory_order_acquire) == capacity_) return false;
    slots_[tail & mask_] = item;
    tail_.store(tail + 1, std::memory_order_release);
    tail_.notify_one();
    return true;
  }

  void push(const T& item) {
    while (true) {
      std::size_t head = head_.load(std::memory_order_acquire);
      if (tail_.load(std::memory_order_relaxed) - head < capacity_) break;
      head_.wait(head, std::memory_order_acquire);
    }
    try_push(item);
  }

  bool try_pop(T& out) {
    std::size_t head = head_.load(std::memory_order_relaxed);
    if (head == tail_.load(std::memory_order_acquire)) return false;
    out = slots_[head & mask_];
    head_.store(head + 1, std::memory_order_release);
    head_.notify_one();
    return true;
  }

  T pop() {
    T out;
    while (!try_pop(out)) {
      tail_.wait(head_.load(std::memory_order_relaxed), std::memory_order_acquire);
    }
    return out;
  }

  bool empty() const noexcept {
    return head_.load(std::memory_order_acquire) == tail_.load(std::memory_order_acquire);
  }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size_hint() const noexcept {
    return tail_.load(std::memory_order_acquire) - head_.load(std::memory_order_acquire);
  }

 private:
  std::size_t capacity_;
  std::vector<T> slots_;
  std::size_t mask_;
  alignas(64) std::atomic<std::size_t> head_{0};
  alignas(64) std::atomic<std::size_t> tail_{0};
};

}  // namespace streamad
