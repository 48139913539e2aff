#include "streamad/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "streamad/clustering.hpp"
#include "streamad/modeling.hpp"
#include "streamad/wire.hpp"

namespace streamad {

std::vector<Anomaly> oracle_run(std::span<const std::string_view> messages,
                                const MetadataMap& metadata, const RunConfig& config) {
  validate_config(config);
  std::map<SensorKey, std::deque<double>> windows;
  std::vector<Anomaly> out;

  for (std::string_view message : messages) {
    ObservationGroup group = parse_group_reference(message);
    for (const Reading& r : group.readings) {
      SensorKey key{group.machine_id, r.property_id};
      auto meta = stateful_sensor(metadata, key);
      if (!meta) continue;
      auto& window = windows[key];
      window.push_back(r.value);
      if (window.size() > config.window_size) window.pop_front();
      if (window.size() < config.window_size) continue;

      std::vector<double> values(window.begin(), window.end());
      ClusteringResult clusters =
          kmeans_full(values, meta->cluster_count, config.max_kmeans_iterations);
      TransitionCounts counts = count_transitions(clusters.assignments);
      auto p = detect(clusters.assignments, counts, config.transition_count, config.threshold);
      if (p) out.push_back({0, group.machine_id, r.property_id, group.timestamp, *p});
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Anomaly& a, const Anomaly& b) {
    return std::tie(a.timestamp, a.machine_id, a.property_id) <
           std::tie(b.timestamp, b.machine_id, b.property_id);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].anomaly_id = i;
  return out;
}

std::string format_anomalies(std::span<const Anomaly> anomalies) {
  std::string text;
  for (const Anomaly& a : anomalies) {
    text += format_anomaly(a);
    text += '\n';
  }
  return text;
}

}  // namespace streamad
