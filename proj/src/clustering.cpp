#include "streamad/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "streamad/exact_sum.hpp"

namespace streamad {

std::string_view trigger_name(Trigger t) noexcept {
  switch (t) {
    case Trigger::kFull:
      return "full";
    case Trigger::kInOut:
      return "inout";
    case Trigger::kK1:
      return "k1";
    case Trigger::kLowK:
      return "lowk";
    case Trigger::kSorted:
      return "sorted";
  }
  return "?";
}

std::vector<double> initial_centers(std::span<const double> values, std::uint32_t cluster_count) {
  std::vector<double> centers;
  for (double v : values) {
    if (centers.size() == cluster_count) break;
    bool seen = std::any_of(centers.begin(), centers.end(),
                            [v](double c) { return same_value(c, v); });
    if (!seen) centers.push_back(v);
  }
  return centers;
}

ClusterIndex nearest_centroid(double value, std::span<const double> centroids) noexcept {
  ClusterIndex best = 0;
  double best_distance = std::fabs(value - centroids[0]);
  for (std::size_t j = 1; j < centroids.size(); ++j) {
    double d = std::fabs(value - centroids[j]);
    if (d < best_distance || (d == best_distance && centroids[j] < centroids[best])) {
      best = static_cast<ClusterIndex>(j);
      best_distance = d;
    }
  }
  return best;
}

namespace {

struct MeanAccumulator {
  std::vector<ExactSum> sums;
  std::vector<std::uint32_t> counts;

  void reset(std::size_t k) {
    if (sums.size() < k) sums.resize(k);
    counts.assign(k, 0);
    for (std::size_t j = 0; j < k; ++j) sums[j].clear();
  }

  void add(ClusterIndex j, double v) {
    sums[j].add(v);
    ++counts[j];
  }

  // Empty clusters keep their centroid.
  void apply(std::vector<double>& centroids) const {
    for (std::size_t j = 0; j < centroids.size(); ++j) {
      if (counts[j] > 0) centroids[j] = sums[j].value() / static_cast<double>(counts[j]);
    }
  }
};

thread_local MeanAccumulator tl_means;
thread_local std::vector<ClusterIndex> tl_labels;

}  // namespace

void kmeans_full(std::span<const double> values, std::uint32_t cluster_count,
                 std::uint32_t max_iterations, ClusteringResult& out) {
  out.centroids = initial_centers(values, cluster_count);
  out.reused = false;
  out.trigger = Trigger::kFull;
  out.iterations = 0;
  auto& current = out.assignments;
  auto& next = tl_labels;
  current.resize(values.size());
  next.resize(values.size());
  auto& means = tl_means;

  for (std::uint32_t it = 0; it < max_iterations; ++it) {
    for (std::size_t i = 0; i < values.size(); ++i) next[i] = nearest_centroid(values[i], out.centroids);
    if (it > 0 && next == current) break;
    current.swap(next);
    means.reset(out.centroids.size());
    for (std::size_t i = 0; i < values.size(); ++i) means.add(current[i], values[i]);
    means.apply(out.centroids);
    out.iterations = it + 1;
  }
}

ClusteringResult kmeans_full(std::span<const double> values, std::uint32_t cluster_count,
                             std::uint32_t max_iterations) {
  ClusteringResult out;
  kmeans_full(values, cluster_count, max_iterations, out);
  return out;
}

bool check_k1(std::span<const double> values, std::uint32_t cluster_count) noexcept {
  if (cluster_count == 1) return true;
  for (double v : values) {
    if (!same_value(v, values.front())) return false;
  }
  return true;
}

std::optional<ClusteringResult> apply_lowk(std::span<const double> values,
                                           std::uint32_t cluster_count) {
  std::unordered_map<std::uint64_t, ClusterIndex> label_of;
  ClusteringResult out;
  out.trigger = Trigger::kLowK;
  out.assignments.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto [it, fresh] =
        label_of.try_emplace(value_key(values[i]), static_cast<ClusterIndex>(out.centroids.size()));
    if (fresh) {
      if (out.centroids.size() + 1 >= cluster_count) return std::nullopt;
      out.centroids.push_back(values[i]);
    }
    out.assignments[i] = it->second;
  }
  if (out.centroids.size() < 2) return std::nullopt;
  return out;
}

bool in_out_check(SensorWindow& window) {
  auto& state = window.reuse();
  auto& freq = state.frequencies;
  const std::uint32_t k = window.cluster_count();
  const std::uint32_t length = window.size();
  const double out_value = *window.prev_first();

  bool result = false;
  if (freq.decrement(out_value) == 0) {
    freq.erase(out_value);
    std::uint32_t pos = state.position;
    while (pos < length && freq.size() < k && freq.contains(window[pos])) {
      freq.increment(window[pos]);
      ++pos;
    }
    if (pos < length) {
      freq.set(window[pos], 1);
      if (same_value(window[pos], out_value)) result = true;
    } else {
      --pos;
    }
    state.position = pos;
  } else {
    result = true;
    --state.position;
  }

  // With fewer than K distinct values the prefix must span the whole
  // window; pick up whatever the slide appended past the frontier.
  if (freq.size() < k) {
    std::uint32_t end = length;
    for (std::uint32_t i = state.position + 1; i < length; ++i) {
      bool fresh = !freq.contains(window[i]);
      freq.increment(window[i]);
      if (fresh && freq.size() == k) {
        end = i + 1;
        break;
      }
    }
    state.position = end - 1;
  }

  return result && same_value(out_value, window.last());
}

ClusteringResult reuse_clusters(const SensorWindow& window) {
  ClusteringResult out;
  out.centroids = window.centroids();
  if (out.centroids.empty() && window.single_cluster()) {
    // The single-cluster shortcut never materializes its centroid.
    ExactSum sum;
    for (double v : window.values()) sum.add(v);
    out.centroids.push_back(sum.value() / static_cast<double>(window.size()));
  }
  auto seq = window.cluster_sequence();
  out.assignments.assign(seq.begin(), seq.end());
  out.reused = true;
  out.trigger = Trigger::kInOut;
  return out;
}

namespace {

// Centroids in ascending (value, label) order with a cursor that only moves
// forward while the values being assigned ascend.
class SweepCentroids {
 public:
  explicit SweepCentroids(std::span<const double> centroids)
      : centroids_(centroids), order_(centroids.size()) {
    std::iota(order_.begin(), order_.end(), ClusterIndex{0});
    resort();
  }

  void resort() {
    // Nearly sorted after a Lloyd update; insertion sort is linear then.
    for (std::size_t i = 1; i < order_.size(); ++i) {
      ClusterIndex x = order_[i];
      std::size_t j = i;
      while (j > 0 && less(x, order_[j - 1])) {
        order_[j] = order_[j - 1];
        --j;
      }
      order_[j] = x;
    }
  }

  void rewind() noexcept { cursor_ = 0; }

  ClusterIndex assign(double v) noexcept {
    std::size_t b = cursor_;
    double bd = std::fabs(v - value(b));
    for (std::size_t k = b + 1; k < order_.size(); ++k) {
      double d = std::fabs(v - value(k));
      if (d < bd) {
        b = k;
        bd = d;
      } else if (value(k) > v) {
        break;
      }
    }
    while (b > 0) {
      double d = std::fabs(v - value(b - 1));
      if (d > bd) break;
      --b;
      bd = d;
    }
    cursor_ = b;
    return order_[b];
  }

 private:
  double value(std::size_t rank) const noexcept { return centroids_[order_[rank]]; }

  bool less(ClusterIndex a, ClusterIndex b) const noexcept {
    return centroids_[a] < centroids_[b] || (centroids_[a] == centroids_[b] && a < b);
  }

  std::span<const double> centroids_;
  std::vector<ClusterIndex> order_;
  std::size_t cursor_ = 0;
};

}  // namespace

std::vector<ClusterIndex> sweep_assign(std::span<const double> sorted_values,
                                       std::span<const double> centroids) {
  SweepCentroids sweep(centroids);
  std::vector<ClusterIndex> out;
  out.reserve(sorted_values.size());
  for (double v : sorted_values) out.push_back(sweep.assign(v));
  return out;
}

ClusteringResult sorted_sweep_kmeans(const std::multiset<double>& sorted,
                                     std::span<const double> values,
                                     std::uint32_t cluster_count, std::uint32_t max_iterations) {
  ClusteringResult out;
  out.trigger = Trigger::kSorted;
  out.centroids = initial_centers(values, cluster_count);
  SweepCentroids sweep(out.centroids);

  std::vector<ClusterIndex> current(sorted.size());
  std::vector<ClusterIndex> next(sorted.size());
  MeanAccumulator means;

  for (std::uint32_t it = 0; it < max_iterations; ++it) {
    sweep.rewind();
    means.reset(out.centroids.size());
    std::size_t i = 0;
    for (double v : sorted) {
      ClusterIndex label = sweep.assign(v);
      next[i++] = label;
      means.add(label, v);
    }
    if (it > 0 && next == current) break;
    current.swap(next);
    means.apply(out.centroids);
    sweep.resort();
    out.iterations = it + 1;
  }

  // Equal values always share a cluster, so a value lookup restores
  // window order.
  std::unordered_map<std::uint64_t, ClusterIndex> label_of;
  std::size_t i = 0;
  for (double v : sorted) label_of[value_key(v)] = current[i++];
  out.assignments.resize(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) out.assignments[j] = label_of[value_key(values[j])];
  return out;
}

bool same_partition(std::span<const ClusterIndex> a, std::span<const ClusterIndex> b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<ClusterIndex, ClusterIndex> forward;
  std::unordered_map<ClusterIndex, ClusterIndex> backward;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [f, f_new] = forward.try_emplace(a[i], b[i]);
    auto [r, r_new] = backward.try_emplace(b[i], a[i]);
    if (f->second != b[i] || r->second != a[i]) return false;
  }
  return true;
}

}  // namespace streamad
