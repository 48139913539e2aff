#pragma once

// Seeded synthetic workloads in the wire format, plus matching metadata.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "streamad/core.hpp"

namespace streamad {

enum class ValueKind : std::uint8_t { kConstant, kCyclic, kUniform, kSpike };

struct ValueModel {
  ValueKind kind = ValueKind::kConstant;
  double constant = 1.0;             // kConstant, and the base of kSpike
  std::vector<double> alphabet;      // kCyclic period / kUniform alphabet
  double spike_value = 1000.0;       // kSpike
  double spike_rate = 0.01;          // kSpike

  static ValueModel constant_of(double v);
  static ValueModel cyclic(std::vector<double> alphabet);
  static ValueModel uniform(std::vector<double> alphabet);
  static ValueModel spike(double base, double rare, double rate);
};

struct GeneratorSpec {
  std::uint32_t machines = 10;
  std::uint32_t sensors_per_machine = 10;
  std::uint32_t groups = 2000;  // per machine, one per tick
  std::uint64_t seed = 1;

  /// Applied to every sensor; when unset each sensor draws its own model.
  std::optional<ValueModel> model;

  std::uint32_t k_min = 1;
  std::uint32_t k_max = 8;
  double stateless_fraction = 0.0;
};

struct GeneratedWorkload {
  std::string corpus;
  MetadataMap metadata;
  std::vector<ValueModel> models;  // machine-major, one per sensor
};

/// Deterministic in the spec: same spec and seed, same bytes.
GeneratedWorkload generate(const GeneratorSpec& spec);

/// Uniform real in [0, 1) from raw engine output, identical on every
/// standard library.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi].
inline std::uint64_t range_draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

}  // namespace streamad
