#include <doctest.h>

#include "streamad/core.hpp"
#include "support.hpp"

using namespace streamad;

TEST_CASE("metadata lines map to sensor entries") {
  auto m = load_metadata("0,0,3,1\n0,1,1,0\n");
  REQUIRE(m.size() == 2);
  CHECK(m.at({0, 0}) == SensorMetadata{3, true});
  CHECK(m.at({0, 1}) == SensorMetadata{1, false});
  CHECK(stateful_sensor(m, {0, 0}).has_value());
  CHECK_FALSE(stateful_sensor(m, {0, 1}).has_value());
  CHECK_FALSE(stateful_sensor(m, {5, 5}).has_value());
}

TEST_CASE("metadata comments, blanks and spacing") {
  auto m = load_metadata("# machine,sensor,k,stateful\n\n  2 , 7 , 4 , 1 \r\n");
  CHECK(m.size() == 1);
  CHECK(m.at({2, 7}).cluster_count == 4);
}

TEST_CASE("metadata errors") {
  CHECK_THROWS_AS(load_metadata("0,0,0,1\n"), DomainError);
  CHECK_THROWS_AS(load_metadata("0,0,-2,1\n"), DomainError);
  CHECK_THROWS_AS(load_metadata("0,0,3,1\n0,0,2,1\n"), DuplicateDefinitionError);
  CHECK_THROWS_AS(load_metadata("0,0,3,2\n"), ParseError);
  CHECK_THROWS_AS(load_metadata("0,0,3\n"), ParseError);
  CHECK_THROWS_AS(load_metadata("0,0,3,1,9\n"), ParseError);

  try {
    load_metadata("# header\n1,1,2,1\n1,x,2,1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("metadata round trip on random maps") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    testgen::Gen gen(seed);
    MetadataMap m;
    const auto n = gen.below(40);
    for (std::uint64_t i = 0; i < n; ++i) {
      SensorKey key{static_cast<MachineId>(gen.below(1000)), static_cast<PropertyId>(gen.below(200))};
      m[key] = {static_cast<std::uint32_t>(gen.range(1, 50)), gen.coin()};
    }
    CHECK(load_metadata(serialize_metadata(m)) == m);
  }
}

TEST_CASE("config defaults and validation") {
  RunConfig cfg;
  CHECK(cfg.transition_count == 5);
  CHECK(cfg.warmup_groups == 5000);
  CHECK(cfg.warmup_passes == 3);
  CHECK(cfg.max_kmeans_iterations == 50);
  CHECK(cfg.synchronized_output);

  cfg.window_size = 10;
  cfg.worker_count = 12;
  CHECK_NOTHROW(validate_config(cfg));

  auto kind_of = [](RunConfig c) {
    try {
      validate_config(c);
    } catch (const ConfigError& e) {
      return e.kind();
    }
    FAIL("expected a config error");
    return ConfigErrorKind::kQueueCapacity;
  };
  RunConfig bad = cfg;
  bad.window_size = 1;
  CHECK(kind_of(bad) == ConfigErrorKind::kWindowTooSmall);
  bad = cfg;
  bad.transition_count = 0;
  CHECK(kind_of(bad) == ConfigErrorKind::kTransitionCountTooSmall);
  bad = cfg;
  bad.threshold = 0.0;
  CHECK(kind_of(bad) == ConfigErrorKind::kThresholdOutOfRange);
  bad.threshold = 1.5;
  CHECK(kind_of(bad) == ConfigErrorKind::kThresholdOutOfRange);
  bad.threshold = std::numeric_limits<double>::quiet_NaN();
  CHECK(kind_of(bad) == ConfigErrorKind::kThresholdOutOfRange);
  bad = cfg;
  bad.worker_count = 0;
  CHECK(kind_of(bad) == ConfigErrorKind::kNoWorkers);
  bad = cfg;
  bad.max_kmeans_iterations = 0;
  CHECK(kind_of(bad) == ConfigErrorKind::kNoKMeansIterations);
  bad = cfg;
  bad.threshold = 1.0;
  CHECK_NOTHROW(validate_config(bad));
}

TEST_CASE("anomaly line format") {
  Anomaly a{3, 7, 12, 1000, 27.0 / 256.0};
  CHECK(format_anomaly(a) == "3\t7\t12\t1000\t0.10546875");
  a.probability = 1.0 / 3.0;
  CHECK(format_anomaly(a) == "3\t7\t12\t1000\t0.333333333333");
}

TEST_CASE("value identity folds signed zero") {
  CHECK(value_key(0.0) == value_key(-0.0));
  CHECK(value_key(1.5) != value_key(-1.5));
  CHECK(same_value(0.0, -0.0));
}
