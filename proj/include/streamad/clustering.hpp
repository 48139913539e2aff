#pragma once

// 1-D K-means over a sensor window, seeded with the first K distinct values,
// and the shortcuts that let most windows skip the Lloyd iterations.
//
// Nearest-centroid ties go to the centroid with the smaller value (then the
// lower index). This makes every assignment a function of the centroid
// values alone, so a window whose first-K-distinct values appear in a
// different order still yields the same partition.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/window.hpp"

namespace streamad {

enum class Trigger : std::uint8_t { kFull, kInOut, kK1, kLowK, kSorted };

std::string_view trigger_name(Trigger t) noexcept;

struct ClusteringResult {
  std::vector<double> centroids;
  std::vector<ClusterIndex> assignments;
  bool reused = false;
  Trigger trigger = Trigger::kFull;
  std::uint32_t iterations = 0;  // centroid updates
};

std::vector<double> initial_centers(std::span<const double> values, std::uint32_t cluster_count);

ClusterIndex nearest_centroid(double value, std::span<const double> centroids) noexcept;

/// Lloyd iterations until the assignment stops changing or `max_iterations`
/// assignment passes ran. Empty clusters keep their centroid.
ClusteringResult kmeans_full(std::span<const double> values, std::uint32_t cluster_count,
                             std::uint32_t max_iterations);
void kmeans_full(std::span<const double> values, std::uint32_t cluster_count,
                 std::uint32_t max_iterations, ClusteringResult& out);

/// True when the window necessarily forms a single cluster.
bool check_k1(std::span<const double> values, std::uint32_t cluster_count) noexcept;

/// Each distinct value becomes its own cluster when 1 < distinct < K.
std::optional<ClusteringResult> apply_lowk(std::span<const double> values,
                                           std::uint32_t cluster_count);

/// IN/OUT test for a window that just slid. Updates the window's reuse
/// state for the next slide and returns true when the previous clustering
/// still holds: the inserted value equals the evicted one and the set of
/// first-K-distinct values is unchanged.
bool in_out_check(SensorWindow& window);

/// The previous clustering carried over to the current window. The label
/// ring already rotated with the values, so the evicted slot holds the
/// inserted value's label.
ClusteringResult reuse_clusters(const SensorWindow& window);

/// Lloyd iterations as a merged sweep over the sorted window and the sorted
/// centroids, accumulating the new means in the same pass. Produces the same
/// assignments and iteration count as kmeans_full.
ClusteringResult sorted_sweep_kmeans(const std::multiset<double>& sorted,
                                     std::span<const double> values,
                                     std::uint32_t cluster_count, std::uint32_t max_iterations);

/// One assignment pass of the sweep, for differential checks against
/// nearest_centroid. `sorted_values` must be ascending.
std::vector<ClusterIndex> sweep_assign(std::span<const double> sorted_values,
                                       std::span<const double> centroids);

/// Partition equality up to a relabeling of clusters.
bool same_partition(std::span<const ClusterIndex> a, std::span<const ClusterIndex> b);

}  // namespace streamad
