#pragma once

// Markov stage. Transition counts are kept as raw integers; the division
// into probabilities only happens for the handful of pairs the detector
// actually looks at.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "streamad/core.hpp"

namespace streamad {

class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using ClusterPair = std::pair<ClusterIndex, ClusterIndex>;

class TransitionCounts {
 public:
  void clear() noexcept {
    pairs_.clear();
    totals_.clear();
  }

  void add(ClusterPair p);
  /// Throws ConsistencyError when the pair is not present.
  void remove(ClusterPair p);

  std::uint32_t pair_count(ClusterPair p) const noexcept;
  std::uint32_t from_total(ClusterIndex a) const noexcept;
  bool has_source(ClusterIndex a) const noexcept { return totals_.contains(a); }

  std::size_t distinct_pairs() const noexcept { return pairs_.size(); }
  std::size_t total_transitions() const noexcept;

  friend bool operator==(const TransitionCounts&, const TransitionCounts&) = default;

 private:
  static std::uint64_t key(ClusterPair p) noexcept {
    return (static_cast<std::uint64_t>(p.first) << 32) | p.second;
  }

  std::unordered_map<std::uint64_t, std::uint32_t> pairs_;
  std::unordered_map<ClusterIndex, std::uint32_t> totals_;
};

/// Counts every consecutive pair, self-transitions included.
TransitionCounts count_transitions(std::span<const ClusterIndex> sequence);
void count_transitions_into(std::span<const ClusterIndex> sequence, TransitionCounts& out);

/// O(1) update for a sequence that rotated left by one position.
void shift_counts(TransitionCounts& counts, ClusterPair dropped, ClusterPair added);

/// pair_count(a, b) / from_total(a). Throws std::out_of_range when `a` has
/// no outgoing transitions.
double transition_probability(const TransitionCounts& counts, ClusterIndex a, ClusterIndex b);

struct ComposedProbability {
  double probability = 1.0;
  std::uint32_t steps = 0;      // pairs multiplied
  std::uint32_t divisions = 0;  // distinct pairs divided
};

/// Product of the transition probabilities of the last min(N, len-1) pairs
/// of `sequence`, oldest pair first. Only the tail of the sequence is read,
/// so callers may pass just the last N+1 labels.
ComposedProbability composed_probability(std::span<const ClusterIndex> sequence,
                                         const TransitionCounts& counts,
                                         std::uint32_t transition_count);

/// The composed probability when it is strictly below `threshold`.
std::optional<double> detect(std::span<const ClusterIndex> sequence, const TransitionCounts& counts,
                             std::uint32_t transition_count, double threshold);

}  // namespace streamad
