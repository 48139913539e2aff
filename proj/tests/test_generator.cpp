#include <doctest.h>

#include <set>

#include "streamad/generator.hpp"
#include "streamad/transport.hpp"
#include "streamad/wire.hpp"

using namespace streamad;

TEST_CASE("same spec, same bytes") {
  GeneratorSpec spec;
  spec.machines = 3;
  spec.groups = 50;
  spec.seed = 99;
  auto a = generate(spec);
  auto b = generate(spec);
  CHECK(a.corpus == b.corpus);
  CHECK(a.metadata == b.metadata);
  spec.seed = 100;
  CHECK(generate(spec).corpus != a.corpus);
}

TEST_CASE("ticks and machine order") {
  GeneratorSpec spec;
  spec.machines = 4;
  spec.sensors_per_machine = 3;
  spec.groups = 20;
  auto wl = generate(spec);
  CorpusSource src(wl.corpus);
  REQUIRE(src.messages().size() == 80);
  for (std::size_t i = 0; i < 80; ++i) {
    ObservationGroup g = parse_group_reference(src.messages()[i]);
    CHECK(g.group_id == i);
    CHECK(g.machine_id == i % 4);
    CHECK(g.timestamp == static_cast<Timestamp>(i / 4) * 10);
    CHECK(g.readings.size() == 3);
  }
}

TEST_CASE("metadata ranges") {
  GeneratorSpec spec;
  spec.machines = 20;
  spec.k_min = 2;
  spec.k_max = 4;
  spec.stateless_fraction = 0.5;
  spec.groups = 1;
  auto wl = generate(spec);
  CHECK(wl.metadata.size() == 200);
  int stateless = 0;
  for (const auto& [key, meta] : wl.metadata) {
    CHECK(meta.cluster_count >= 2);
    CHECK(meta.cluster_count <= 4);
    stateless += meta.stateful ? 0 : 1;
  }
  CHECK(stateless > 50);
  CHECK(stateless < 150);
}

TEST_CASE("value models") {
  auto values_of = [](const ValueModel& model, std::uint32_t groups) {
    GeneratorSpec spec;
    spec.machines = 1;
    spec.sensors_per_machine = 1;
    spec.groups = groups;
    spec.model = model;
    auto wl = generate(spec);
    CorpusSource src(wl.corpus);
    std::vector<double> out;
    for (auto m : src.messages()) out.push_back(parse_group_reference(m).readings[0].value);
    return out;
  };
  for (double v : values_of(ValueModel::constant_of(-3.5), 20)) CHECK(v == -3.5);

  auto cyc = values_of(ValueModel::cyclic({1, 2, 3}), 9);
  CHECK(cyc == std::vector<double>{1, 2, 3, 1, 2, 3, 1, 2, 3});

  auto uni = values_of(ValueModel::uniform({4, 8}), 500);
  std::set<double> seen(uni.begin(), uni.end());
  CHECK(seen == std::set<double>{4, 8});

  auto spikes = values_of(ValueModel::spike(1.0, 50.0, 0.1), 5000);
  auto n = std::count(spikes.begin(), spikes.end(), 50.0);
  CHECK(n > 350);
  CHECK(n < 650);
  CHECK(std::count(spikes.begin(), spikes.end(), 1.0) == 5000 - n);
}
