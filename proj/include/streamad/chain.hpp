#pragma once

#include <cstdint>
#include <optional>

#include "streamad/clustering.hpp"
#include "streamad/core.hpp"
#include "streamad/window.hpp"

namespace streamad {

struct ChainOptions {
  std::uint32_t transition_count = 5;
  double threshold = 0.005;
  std::uint32_t max_iterations = 50;
  bool force_full = false;
  bool sorted_sweep = false;

  static ChainOptions from(const RunConfig& cfg) noexcept {
    return {cfg.transition_count, cfg.threshold, cfg.max_kmeans_iterations, cfg.force_full,
            cfg.sorted_sweep};
  }
};

struct TriggerCounters {
  std::uint64_t full = 0;
  std::uint64_t inout = 0;
  std::uint64_t k1 = 0;
  std::uint64_t lowk = 0;
  std::uint64_t sorted = 0;

  std::uint64_t windows() const noexcept { return full + inout + k1 + lowk + sorted; }
  void record(Trigger t) noexcept;

  TriggerCounters& operator+=(const TriggerCounters& o) noexcept {
    full += o.full;
    inout += o.inout;
    k1 += o.k1;
    lowk += o.lowk;
    sorted += o.sorted;
    return *this;
  }
};

/// Outcome of pushing one value through a sensor's chain.
struct ChainStep {
  bool window_processed = false;
  Trigger trigger = Trigger::kFull;
  std::optional<double> anomaly;
};

/// Slides `value` into the window and, once the window is full, runs
/// clustering (IN/OUT, K1 and LowK first, in that order), the Markov counts
/// and detection.
class SensorChain {
 public:
  explicit SensorChain(ChainOptions options) : options_(options) {}

  ChainStep push(SensorWindow& window, double value);

  const ChainOptions& options() const noexcept { return options_; }

 private:
  std::optional<double> detect_on(const SensorWindow& window) const;
  std::optional<double> recluster(SensorWindow& window, Trigger trigger);

  ChainOptions options_;
  ClusteringResult scratch_;
};

}  // namespace streamad
