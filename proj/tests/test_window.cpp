#include <doctest.h>

#include <deque>

#include "streamad/window.hpp"
#include "support.hpp"

using namespace streamad;

namespace {

std::vector<double> contents(const SensorWindow& w) { return {w.values().begin(), w.values().end()}; }

}  // namespace

TEST_CASE("fill and slide") {
  SensorWindow w(3, 2);
  CHECK_FALSE(w.is_full());
  CHECK_FALSE(w.slide(1));
  CHECK_FALSE(w.slide(2));
  CHECK_FALSE(w.is_full());
  CHECK_FALSE(w.slide(5));
  CHECK(w.is_full());
  CHECK(contents(w) == std::vector<double>{1, 2, 5});
  CHECK_FALSE(w.prev_first());

  auto evicted = w.slide(9);
  REQUIRE(evicted);
  CHECK(*evicted == 1);
  CHECK(*w.prev_first() == 1);
  CHECK(contents(w) == std::vector<double>{2, 5, 9});
  CHECK(w.last() == 9);
  CHECK(w[0] == 2);
}

TEST_CASE("window holds the last W values") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    testgen::Gen gen(seed);
    const auto cap = static_cast<std::uint32_t>(gen.range(2, 30));
    SensorWindow w(cap, 3, true);
    std::deque<double> model;
    for (int i = 0; i < 100; ++i) {
      double v = gen.unit();
      w.slide(v);
      model.push_back(v);
      if (model.size() > cap) model.pop_front();
      REQUIRE(w.size() == model.size());
      CHECK(contents(w) == std::vector<double>(model.begin(), model.end()));
      std::multiset<double> sorted(model.begin(), model.end());
      CHECK(*w.sorted() == sorted);
    }
  }
}

TEST_CASE("labels rotate with values") {
  SensorWindow w(4, 3);
  for (double v : {2.0, 5.0, 2.0, 7.0}) w.slide(v);
  std::vector<ClusterIndex> labels{0, 1, 0, 2};
  w.set_cluster_sequence(labels);
  w.slide(2.0);
  auto seq = w.cluster_sequence();
  CHECK(std::vector<ClusterIndex>(seq.begin(), seq.end()) == std::vector<ClusterIndex>{1, 0, 2, 0});
}

TEST_CASE("reuse prefix scan") {
  std::vector<double> a{2, 5, 2, 7};
  ReuseState s = scan_reuse_state(a, 2);
  CHECK(s.frequencies.size() == 2);
  CHECK(s.frequencies.count(2) == 1);
  CHECK(s.frequencies.count(5) == 1);
  CHECK(s.position == 1);

  std::vector<double> b{2, 2, 5, 7};
  s = scan_reuse_state(b, 2);
  CHECK(s.frequencies.count(2) == 2);
  CHECK(s.position == 2);

  // Fewer than K distinct: the prefix is the whole window.
  std::vector<double> c{4, 4, 4};
  s = scan_reuse_state(c, 3);
  CHECK(s.frequencies.count(4) == 3);
  CHECK(s.position == 2);
}

TEST_CASE("reset restores a pristine window") {
  SensorWindow w(3, 2, true);
  CHECK(w.pristine());
  for (double v : {1.0, 2.0, 3.0, 4.0}) w.slide(v);
  w.reuse() = scan_reuse_state(w.values(), 2);
  w.counts().add({0, 1});
  w.set_chain_valid(true);
  CHECK_FALSE(w.pristine());
  w.reset();
  CHECK(w.pristine());
}

TEST_CASE("store lookup") {
  MetadataMap m;
  m[{0, 0}] = {3, true};
  m[{0, 1}] = {1, false};
  m[{4, 2}] = {2, true};
  WindowStore store(m, 10);
  CHECK(store.window_count() == 2);
  REQUIRE(store.lookup({0, 0}) != nullptr);
  CHECK(store.lookup({0, 0})->size() == 0);
  CHECK(store.lookup({0, 0})->cluster_count() == 3);
  CHECK(store.lookup({0, 1}) == nullptr);
  CHECK(store.lookup({4, 2}) != nullptr);
  CHECK(store.lookup({4, 3}) == nullptr);
  CHECK(store.lookup({99, 0}) == nullptr);
  CHECK(store.has_windows(0));
  CHECK_FALSE(store.has_windows(1));
  CHECK(store.has_windows(4));
  CHECK_FALSE(store.has_windows(1000));
}
