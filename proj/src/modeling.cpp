#include "streamad/modeling.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace streamad {

void TransitionCounts::add(ClusterPair p) {
  ++pairs_[key(p)];
  ++totals_[p.first];
}

void TransitionCounts::remove(ClusterPair p) {
  auto it = pairs_.find(key(p));
  if (it == pairs_.end()) {
    throw ConsistencyError("transition " + std::to_string(p.first) + "->" +
                           std::to_string(p.second) + " is not counted");
  }
  if (--it->second == 0) pairs_.erase(it);
  auto t = totals_.find(p.first);
  if (--t->second == 0) totals_.erase(t);
}

std::uint32_t TransitionCounts::pair_count(ClusterPair p) const noexcept {
  auto it = pairs_.find(key(p));
  return it == pairs_.end() ? 0 : it->second;
}

std::uint32_t TransitionCounts::from_total(ClusterIndex a) const noexcept {
  auto it = totals_.find(a);
  return it == totals_.end() ? 0 : it->second;
}

std::size_t TransitionCounts::total_transitions() const noexcept {
  std::size_t sum = 0;
  for (const auto& [a, n] : totals_) sum += n;
  return sum;
}

void count_transitions_into(std::span<const ClusterIndex> seq, TransitionCounts& out) {
  out.clear();
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) out.add({seq[i], seq[i + 1]});
}

TransitionCounts count_transitions(std::span<const ClusterIndex> seq) {
  TransitionCounts out;
  count_transitions_into(seq, out);
  return out;
}

void shift_counts(TransitionCounts& counts, ClusterPair dropped, ClusterPair added) {
  counts.remove(dropped);
  counts.add(added);
}

double transition_probability(const TransitionCounts& counts, ClusterIndex a, ClusterIndex b) {
  std::uint32_t total = counts.from_total(a);
  if (total == 0) {
    throw std::out_of_range("cluster " + std::to_string(a) + " has no outgoing transitions");
  }
  return static_cast<double>(counts.pair_count({a, b})) / static_cast<double>(total);
}

ComposedProbability composed_probability(std::span<const ClusterIndex> seq,
                                         const TransitionCounts& counts,
                                         std::uint32_t transition_count) {
  ComposedProbability out;
  if (seq.size() < 2) return out;
  std::size_t steps = std::min<std::size_t>(transition_count, seq.size() - 1);
  std::size_t first = seq.size() - 1 - steps;

  // Memo of already divided pairs; at most `steps` entries.
  struct Memo {
    ClusterPair pair;
    double probability;
  };
  std::array<Memo, 16> small{};
  std::vector<Memo> large;
  Memo* memo = small.data();
  if (steps > small.size()) {
    large.resize(steps);
    memo = large.data();
  }
  std::size_t memo_size = 0;

  for (std::size_t i = first; i + 1 < seq.size(); ++i) {
    ClusterPair pair{seq[i], seq[i + 1]};
    double p = 0.0;
    bool found = false;
    for (std::size_t j = 0; j < memo_size; ++j) {
      if (memo[j].pair == pair) {
        p = memo[j].probability;
        found = true;
        break;
      }
    }
    if (!found) {
      p = transition_probability(counts, pair.first, pair.second);
      memo[memo_size++] = {pair, p};
      ++out.divisions;
    }
    out.probability *= p;
    ++out.steps;
  }
  return out;
}

std::optional<double> detect(std::span<const ClusterIndex> seq, const TransitionCounts& counts,
                             std::uint32_t transition_count, double threshold) {
  auto composed = composed_probability(seq, counts, transition_count);
  if (composed.probability < threshold) return composed.probability;
  return std::nullopt;
}

}  // namespace streamad
