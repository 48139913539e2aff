#include "streamad/window.hpp"

namespace streamad {

std::uint32_t FrequencyMap::count(double v) const {
  auto it = counts_.find(value_key(v));
  return it == counts_.end() ? 0 : it->second;
}

std::uint32_t FrequencyMap::decrement(double v) {
  auto it = counts_.find(value_key(v));
  if (it == counts_.end()) return 0;
  if (it->second > 0) --it->second;
  return it->second;
}

ReuseState scan_reuse_state(std::span<const double> values, std::uint32_t cluster_count) {
  ReuseState state;
  std::size_t prefix_end = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    bool fresh = !state.frequencies.contains(values[i]);
    state.frequencies.increment(values[i]);
    if (fresh && state.frequencies.size() == cluster_count) {
      prefix_end = i + 1;
      break;
    }
  }
  state.position = prefix_end == 0 ? 0 : static_cast<std::uint32_t>(prefix_end - 1);
  state.ready = true;
  return state;
}

SensorWindow::SensorWindow(std::uint32_t capacity, std::uint32_t cluster_count, bool keep_sorted)
    : capacity_(capacity),
      cluster_count_(cluster_count),
      values_(2 * static_cast<std::size_t>(capacity)),
      labels_(2 * static_cast<std::size_t>(capacity)) {
  if (keep_sorted) sorted_ = std::make_unique<std::multiset<double>>();
}

std::optional<double> SensorWindow::slide(double v) {
  if (size_ < capacity_) {
    values_[size_] = v;
    values_[size_ + capacity_] = v;
    ++size_;
    if (sorted_) sorted_->insert(v);
    return std::nullopt;
  }
  double evicted = values_[start_];
  values_[start_] = v;
  values_[start_ + capacity_] = v;
  start_ = start_ + 1 == capacity_ ? 0 : start_ + 1;
  prev_first_ = evicted;
  if (sorted_) {
    sorted_->erase(sorted_->find(evicted));
    sorted_->insert(v);
  }
  return evicted;
}

void SensorWindow::set_cluster_sequence(std::span<const ClusterIndex> labels) {
  std::uint32_t phys = start_;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels_[phys] = labels[i];
    labels_[phys + capacity_] = labels[i];
    phys = phys + 1 == capacity_ ? 0 : phys + 1;
  }
}

void SensorWindow::fill_cluster_sequence(ClusterIndex label) {
  std::fill(labels_.begin(), labels_.end(), label);
}

void SensorWindow::reset() {
  size_ = 0;
  start_ = 0;
  std::fill(values_.begin(), values_.end(), 0.0);
  std::fill(labels_.begin(), labels_.end(), 0);
  prev_first_.reset();
  if (sorted_) sorted_->clear();
  reuse_ = ReuseState{};
  centroids_.clear();
  counts_.clear();
  chain_valid_ = false;
  single_cluster_ = false;
}

bool SensorWindow::pristine() const {
  return size_ == 0 && start_ == 0 && !prev_first_ && (!sorted_ || sorted_->empty()) &&
         !reuse_.ready && reuse_.frequencies.size() == 0 && reuse_.position == 0 &&
         centroids_.empty() && counts_.distinct_pairs() == 0 && !chain_valid_ && !single_cluster_;
}

WindowStore::WindowStore(const MetadataMap& metadata, std::uint32_t window_size, bool keep_sorted) {
  std::size_t count = 0;
  for (const auto& [key, meta] : metadata) {
    if (!meta.stateful) continue;
    if (key.machine_id >= index_.size()) index_.resize(key.machine_id + 1);
    auto& row = index_[key.machine_id];
    if (key.property_id >= row.size()) row.resize(key.property_id + 1, -1);
    row[key.property_id] = static_cast<std::int32_t>(count++);
  }
  windows_.reserve(count);
  for (const auto& [key, meta] : metadata) {
    if (meta.stateful) windows_.emplace_back(window_size, meta.cluster_count, keep_sorted);
  }
}

SensorWindow* WindowStore::lookup(SensorKey key) noexcept {
  if (key.machine_id >= index_.size()) return nullptr;
  const auto& row = index_[key.machine_id];
  if (key.property_id >= row.size() || row[key.property_id] < 0) return nullptr;
  return &windows_[static_cast<std::size_t>(row[key.property_id])];
}

const SensorWindow* WindowStore::lookup(SensorKey key) const noexcept {
  return const_cast<WindowStore*>(this)->lookup(key);
}

bool WindowStore::has_windows(MachineId machine) const noexcept {
  return machine < index_.size() && !index_[machine].empty();
}

void WindowStore::reset() {
  for (auto& w : windows_) w.reset();
}

bool WindowStore::pristine() const {
  for (const auto& w : windows_) {
    if (!w.pristine()) return false;
  }
  return true;
}

}  // namespace streamad
