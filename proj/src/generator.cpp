#include "streamad/generator.hpp"

#include "streamad/wire.hpp"

namespace streamad {

ValueModel ValueModel::constant_of(double v) {
  ValueModel m;
  m.kind = ValueKind::kConstant;
  m.constant = v;
  return m;
}

ValueModel ValueModel::cyclic(std::vector<double> alphabet) {
  ValueModel m;
  m.kind = ValueKind::kCyclic;
  m.alphabet = std::move(alphabet);
  return m;
}

ValueModel ValueModel::uniform(std::vector<double> alphabet) {
  ValueModel m;
  m.kind = ValueKind::kUniform;
  m.alphabet = std::move(alphabet);
  return m;
}

ValueModel ValueModel::spike(double base, double rare, double rate) {
  ValueModel m;
  m.kind = ValueKind::kSpike;
  m.constant = base;
  m.spike_value = rare;
  m.spike_rate = rate;
  return m;
}

namespace {

// Two-decimal values in [-50, 50), so the corpus carries negatives.
double draw_value(std::mt19937_64& rng) {
  return static_cast<double>(static_cast<std::int64_t>(range_draw(rng, 0, 9999)) - 5000) / 100.0;
}

std::vector<double> draw_alphabet(std::mt19937_64& rng, std::uint32_t size) {
  std::vector<double> out;
  while (out.size() < size) {
    double v = draw_value(rng);
    bool fresh = true;
    for (double a : out) fresh = fresh && a != v;
    if (fresh) out.push_back(v);
  }
  return out;
}

ValueModel draw_model(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0:
      return ValueModel::constant_of(draw_value(rng));
    case 1:
      return ValueModel::cyclic(draw_alphabet(rng, static_cast<std::uint32_t>(range_draw(rng, 1, 6))));
    case 2:
      return ValueModel::uniform(draw_alphabet(rng, static_cast<std::uint32_t>(range_draw(rng, 1, 10))));
    default: {
      double base = draw_value(rng);
      return ValueModel::spike(base, base + 500.0, 0.005 + 0.045 * unit_draw(rng));
    }
  }
}

double next_value(const ValueModel& m, std::uint64_t tick, std::mt19937_64& rng) {
  switch (m.kind) {
    case ValueKind::kConstant:
      return m.constant;
    case ValueKind::kCyclic:
      return m.alphabet[tick % m.alphabet.size()];
    case ValueKind::kUniform:
      return m.alphabet[rng() % m.alphabet.size()];
    case ValueKind::kSpike:
      return unit_draw(rng) < m.spike_rate ? m.spike_value : m.constant;
  }
  return m.constant;
}

}  // namespace

GeneratedWorkload generate(const GeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  GeneratedWorkload out;

  const std::uint32_t k_lo = std::max<std::uint32_t>(1, spec.k_min);
  const std::uint32_t k_hi = std::max(k_lo, spec.k_max);
  for (MachineId m = 0; m < spec.machines; ++m) {
    for (PropertyId s = 0; s < spec.sensors_per_machine; ++s) {
      SensorMetadata meta;
      meta.cluster_count = static_cast<std::uint32_t>(range_draw(rng, k_lo, k_hi));
      meta.stateful = !(unit_draw(rng) < spec.stateless_fraction);
      out.metadata[{m, s}] = meta;
      out.models.push_back(spec.model ? *spec.model : draw_model(rng));
    }
  }

  ObservationGroup group;
  group.readings.resize(spec.sensors_per_machine);
  GroupId next_group = 0;
  for (std::uint64_t tick = 0; tick < spec.groups; ++tick) {
    for (MachineId m = 0; m < spec.machines; ++m) {
      group.group_id = next_group++;
      group.machine_id = m;
      group.timestamp = static_cast<Timestamp>(tick * 10);
      for (PropertyId s = 0; s < spec.sensors_per_machine; ++s) {
        const ValueModel& model = out.models[std::size_t{m} * spec.sensors_per_machine + s];
        group.readings[s] = {s, next_value(model, tick, rng)};
      }
      append_group(out.corpus, group);
    }
  }
  return out;
}

}  // namespace streamad
