#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/modeling.hpp"

namespace streamad {

/// Multiplicities of window values, keyed by value identity.
class FrequencyMap {
 public:
  void clear() noexcept { counts_.clear(); }
  std::size_t size() const noexcept { return counts_.size(); }
  bool contains(double v) const { return counts_.contains(value_key(v)); }
  std::uint32_t count(double v) const;

  void increment(double v) { ++counts_[value_key(v)]; }
  void set(double v, std::uint32_t n) { counts_[value_key(v)] = n; }
  /// Decrements and returns the remaining count; absent values stay absent.
  std::uint32_t decrement(double v);
  void erase(double v) { counts_.erase(value_key(v)); }

  friend bool operator==(const FrequencyMap&, const FrequencyMap&) = default;

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> counts_;
};

/// State carried from one window to the next so IN/OUT can decide reuse
/// without rescanning.
///
/// `frequencies` holds the multiplicities of the prefix values[0, p) where
/// p is one past the first occurrence of the K-th distinct value, or the
/// window length when fewer than K distinct values exist. `position` stores
/// p - 1, i.e. p expressed in the coordinates of the next window.
struct ReuseState {
  FrequencyMap frequencies;
  std::uint32_t position = 0;
  bool ready = false;
};

/// From-scratch prefix scan establishing the ReuseState invariant.
ReuseState scan_reuse_state(std::span<const double> values, std::uint32_t cluster_count);

/// Sliding window of one sensor plus everything the processing chain keeps
/// between windows. Values and labels live in mirrored ring buffers so the
/// logical window is always one contiguous span.
class SensorWindow {
 public:
  SensorWindow(std::uint32_t capacity, std::uint32_t cluster_count, bool keep_sorted = false);

  /// Appends `v`; once full, evicts and returns the oldest value, which
  /// also becomes prev_first.
  std::optional<double> slide(double v);

  bool is_full() const noexcept { return size_ == capacity_; }
  std::uint32_t size() const noexcept { return size_; }
  std::uint32_t capacity() const noexcept { return capacity_; }
  std::uint32_t cluster_count() const noexcept { return cluster_count_; }

  std::span<const double> values() const noexcept { return {values_.data() + start_, size_}; }
  double operator[](std::size_t i) const noexcept { return values_[start_ + i]; }
  double last() const noexcept { return values_[start_ + size_ - 1]; }

  std::optional<double> prev_first() const noexcept { return prev_first_; }

  /// Sorted view of the window, maintained only when constructed with
  /// keep_sorted.
  const std::multiset<double>* sorted() const noexcept { return sorted_.get(); }

  ReuseState& reuse() noexcept { return reuse_; }
  const ReuseState& reuse() const noexcept { return reuse_; }

  /// Cluster label per logical position. Valid when chain_valid().
  std::span<const ClusterIndex> cluster_sequence() const noexcept {
    return {labels_.data() + start_, size_};
  }
  void set_cluster_sequence(std::span<const ClusterIndex> labels);
  void fill_cluster_sequence(ClusterIndex label);

  std::vector<double>& centroids() noexcept { return centroids_; }
  const std::vector<double>& centroids() const noexcept { return centroids_; }
  TransitionCounts& counts() noexcept { return counts_; }
  const TransitionCounts& counts() const noexcept { return counts_; }

  /// True when labels, centroids and counts describe the previous window.
  bool chain_valid() const noexcept { return chain_valid_; }
  void set_chain_valid(bool v) noexcept { chain_valid_ = v; }
  bool single_cluster() const noexcept { return single_cluster_; }
  void set_single_cluster(bool v) noexcept { single_cluster_ = v; }

  void reset();
  /// True when indistinguishable from a freshly constructed window.
  bool pristine() const;

 private:
  std::uint32_t capacity_;
  std::uint32_t cluster_count_;
  std::uint32_t size_ = 0;
  std::uint32_t start_ = 0;
  std::vector<double> values_;        // 2 * capacity, mirrored
  std::vector<ClusterIndex> labels_;  // 2 * capacity, mirrored
  std::optional<double> prev_first_;
  std::unique_ptr<std::multiset<double>> sorted_;
  ReuseState reuse_;
  std::vector<double> centroids_;
  TransitionCounts counts_;
  bool chain_valid_ = false;
  bool single_cluster_ = false;
};

/// Windows of every stateful sensor, indexed [machine][property]. The outer
/// structure never changes after construction.
class WindowStore {
 public:
  WindowStore(const MetadataMap& metadata, std::uint32_t window_size, bool keep_sorted = false);

  SensorWindow* lookup(SensorKey key) noexcept;
  const SensorWindow* lookup(SensorKey key) const noexcept;

  std::size_t machine_count() const noexcept { return index_.size(); }
  std::size_t window_count() const noexcept { return windows_.size(); }
  /// Machines that have at least one stateful sensor.
  bool has_windows(MachineId machine) const noexcept;

  void reset();
  bool pristine() const;

 private:
  std::vector<std::vector<std::int32_t>> index_;
  std::vector<SensorWindow> windows_;
};

}  // namespace streamad
