#include "streamad/chain.hpp"

#include "streamad/modeling.hpp"

namespace streamad {

void TriggerCounters::record(Trigger t) noexcept {
  switch (t) {
    case Trigger::kFull:
      ++full;
      break;
    case Trigger::kInOut:
      ++inout;
      break;
    case Trigger::kK1:
      ++k1;
      break;
    case Trigger::kLowK:
      ++lowk;
      break;
    case Trigger::kSorted:
      ++sorted;
      break;
  }
}

std::optional<double> SensorChain::detect_on(const SensorWindow& window) const {
  return detect(window.cluster_sequence(), window.counts(), options_.transition_count,
                options_.threshold);
}

std::optional<double> SensorChain::recluster(SensorWindow& window, Trigger trigger) {
  auto values = window.values();
  const std::uint32_t k = window.cluster_count();
  switch (trigger) {
    case Trigger::kLowK:
      scratch_ = *apply_lowk(values, k);
      break;
    case Trigger::kSorted:
      scratch_ = sorted_sweep_kmeans(*window.sorted(), values, k, options_.max_iterations);
      break;
    default:
      kmeans_full(values, k, options_.max_iterations, scratch_);
      break;
  }
  window.set_cluster_sequence(scratch_.assignments);
  window.centroids().swap(scratch_.centroids);
  count_transitions_into(window.cluster_sequence(), window.counts());
  window.set_chain_valid(true);
  window.set_single_cluster(false);
  return detect_on(window);
}

ChainStep SensorChain::push(SensorWindow& window, double value) {
  ChainStep step;
  window.slide(value);
  if (!window.is_full()) return step;
  step.window_processed = true;

  const Trigger full_trigger =
      options_.sorted_sweep && window.sorted() != nullptr ? Trigger::kSorted : Trigger::kFull;
  if (options_.force_full) {
    step.trigger = full_trigger;
    step.anomaly = recluster(window, full_trigger);
    return step;
  }

  auto& reuse = window.reuse();
  bool inout = false;
  if (reuse.ready && window.chain_valid()) {
    inout = in_out_check(window);
  } else {
    reuse = scan_reuse_state(window.values(), window.cluster_count());
  }

  // Reuse only windows that went through K-means proper: at least K
  // distinct values and K > 1. Single-cluster and low-distinct windows
  // belong to K1 and LowK, which keeps the three triggers disjoint.
  const std::uint32_t k = window.cluster_count();
  inout = inout && k > 1 && reuse.frequencies.size() == k;

  if (inout) {
    // Labels rotated with the values: the old first label now sits last.
    auto seq = window.cluster_sequence();
    const std::size_t n = seq.size();
    shift_counts(window.counts(), {seq[n - 1], seq[0]}, {seq[n - 2], seq[n - 1]});
    step.trigger = Trigger::kInOut;
    step.anomaly = detect_on(window);
    return step;
  }

  if (check_k1(window.values(), k)) {
    // One cluster means every transition has probability 1.
    step.trigger = Trigger::kK1;
    if (!window.single_cluster() || !window.chain_valid()) {
      window.fill_cluster_sequence(0);
      window.centroids().clear();
      auto& counts = window.counts();
      counts.clear();
      for (std::uint32_t i = 0; i + 1 < window.size(); ++i) counts.add({0, 0});
      window.set_single_cluster(true);
      window.set_chain_valid(true);
    }
    return step;
  }

  // The reuse prefix spans the whole window whenever it holds fewer than K
  // distinct values, so its size is the distinct count.
  if (reuse.frequencies.size() < k) {
    step.trigger = Trigger::kLowK;
  } else {
    step.trigger = full_trigger;
  }
  step.anomaly = recluster(window, step.trigger);
  return step;
}

}  // namespace streamad
