#pragma once

// Seeded generators for property tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/generator.hpp"

namespace testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  double unit() { return streamad::unit_draw(rng_); }
  bool coin() { return (rng_() & 1) != 0; }

  /// Values from a small alphabet so repeats and ties are common.
  std::vector<double> values(std::size_t n, std::uint32_t alphabet) {
    std::vector<double> out(n);
    for (auto& v : out) v = static_cast<double>(below(alphabet)) * 0.5 - 1.0;
    return out;
  }

  std::vector<double> reals(std::size_t n, double lo, double hi) {
    std::vector<double> out(n);
    for (auto& v : out) v = lo + (hi - lo) * unit();
    return out;
  }

  std::vector<streamad::ClusterIndex> labels(std::size_t n, std::uint32_t k) {
    std::vector<streamad::ClusterIndex> out(n);
    for (auto& c : out) c = static_cast<streamad::ClusterIndex>(below(k));
    return out;
  }

  streamad::ObservationGroup group() {
    streamad::ObservationGroup g;
    g.group_id = rng_() >> range(1, 60);
    g.machine_id = static_cast<streamad::MachineId>(rng_() >> range(33, 63));
    g.timestamp = static_cast<streamad::Timestamp>(rng_() >> range(2, 63));
    streamad::PropertyId p = static_cast<streamad::PropertyId>(below(4));
    const auto n = below(10);
    for (std::uint64_t i = 0; i < n; ++i) {
      double v = (unit() - 0.5) * std::pow(10.0, static_cast<double>(range(-30, 30)));
      if (below(8) == 0) v = static_cast<double>(range(-1000, 1000));
      g.readings.push_back({p, v});
      p += static_cast<streamad::PropertyId>(range(1, 1000));
    }
    return g;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testgen
