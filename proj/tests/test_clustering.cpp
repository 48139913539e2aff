#include <doctest.h>

#include <algorithm>
#include <bit>

#include "streamad/clustering.hpp"
#include "support.hpp"

using namespace streamad;

using Labels = std::vector<ClusterIndex>;
using Values = std::vector<double>;

TEST_CASE("first K distinct values seed the centroids") {
  CHECK(initial_centers(Values{2, 5, 2, 7, 5}, 3) == Values{2, 5, 7});
  CHECK(initial_centers(Values{4, 4, 4, 4}, 3) == Values{4});
  CHECK(initial_centers(Values{1, 2, 9, 10}, 2) == Values{1, 2});
}

TEST_CASE("nearest centroid ties") {
  // Equidistant: the smaller centroid value wins whatever its index.
  CHECK(nearest_centroid(5.0, Values{4.0, 6.0}) == 0);
  CHECK(nearest_centroid(5.0, Values{6.0, 4.0}) == 1);
  CHECK(nearest_centroid(5.9, Values{4.0, 6.0}) == 1);
}

TEST_CASE("lloyd iterations") {
  auto r = kmeans_full(Values{1, 2, 9, 10}, 2, 50);
  CHECK(r.centroids == Values{1.5, 9.5});
  CHECK(r.assignments == Labels{0, 0, 1, 1});
  CHECK(r.iterations == 2);  // third pass only confirms

  r = kmeans_full(Values{4, 4, 4, 4}, 2, 50);
  CHECK(r.centroids == Values{4});
  CHECK(r.assignments == Labels{0, 0, 0, 0});

  r = kmeans_full(Values{0, 0, 10, 10}, 2, 50);
  CHECK(r.centroids == Values{0, 10});
  CHECK(r.assignments == Labels{0, 0, 1, 1});
  CHECK(r.iterations == 1);

  // The cap stops after one assignment pass.
  r = kmeans_full(Values{1, 2, 9, 10}, 2, 1);
  CHECK(r.assignments == Labels{0, 1, 1, 1});
}

TEST_CASE("lloyd results are fixed points") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    CAPTURE(seed);
    testgen::Gen gen(seed);
    auto values = gen.coin() ? gen.values(gen.range(2, 60), 9) : gen.reals(gen.range(2, 60), -5, 5);
    const auto k = static_cast<std::uint32_t>(gen.range(1, 8));
    auto r = kmeans_full(values, k, 1000);
    CHECK(r.centroids.size() <= k);
    for (std::size_t i = 0; i < values.size(); ++i) {
      REQUIRE(r.assignments[i] < r.centroids.size());
      CHECK(r.assignments[i] == nearest_centroid(values[i], r.centroids));
    }
    CHECK(kmeans_full(values, k, 1000).assignments == r.assignments);
  }
}

TEST_CASE("single cluster check") {
  CHECK(check_k1(Values{1, 2, 3}, 1));
  CHECK(check_k1(Values{7, 7, 7}, 4));
  CHECK_FALSE(check_k1(Values{7, 7, 8}, 4));
  CHECK(check_k1(Values{0.0, -0.0}, 2));
}

TEST_CASE("low distinct count") {
  auto r = apply_lowk(Values{3, 5, 3, 5}, 3);
  REQUIRE(r);
  CHECK(r->centroids == Values{3, 5});
  CHECK(r->assignments == Labels{0, 1, 0, 1});
  CHECK(r->trigger == Trigger::kLowK);
  CHECK_FALSE(apply_lowk(Values{1, 2, 3}, 3));
  CHECK_FALSE(apply_lowk(Values{9, 9, 9}, 3));

  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testgen::Gen gen(seed);
    auto values = gen.values(gen.range(2, 40), static_cast<std::uint32_t>(gen.range(2, 5)));
    auto lowk = apply_lowk(values, 6);
    if (!lowk) continue;
    CHECK(same_partition(lowk->assignments, kmeans_full(values, 6, 50).assignments));
  }
}

namespace {

SensorWindow primed(const Values& old, std::uint32_t k) {
  SensorWindow w(static_cast<std::uint32_t>(old.size()), k);
  for (double v : old) w.slide(v);
  w.reuse() = scan_reuse_state(w.values(), k);
  return w;
}

}  // namespace

TEST_CASE("reuse check traces") {
  SUBCASE("value leaves and re-enters at the prefix frontier") {
    SensorWindow w = primed({2, 5, 2, 7}, 2);
    CHECK(w.reuse().position == 1);
    w.slide(2);
    CHECK(in_out_check(w));
    CHECK(w.reuse().position == 1);
    CHECK(w.reuse().frequencies.count(5) == 1);
    CHECK(w.reuse().frequencies.count(2) == 1);
  }
  SUBCASE("duplicate inside the prefix, different value enters") {
    SensorWindow w = primed({2, 2, 5, 7}, 2);
    CHECK(w.reuse().position == 2);
    w.slide(9);
    CHECK_FALSE(in_out_check(w));
    CHECK(w.reuse().frequencies.count(2) == 1);
    CHECK(w.reuse().frequencies.count(5) == 1);
    CHECK(w.reuse().position == 1);
    ReuseState fresh = scan_reuse_state(w.values(), 2);
    CHECK(fresh.frequencies == w.reuse().frequencies);
    CHECK(fresh.position == w.reuse().position);
  }
  SUBCASE("first distinct set changes") {
    SensorWindow w = primed({2, 5, 5, 7}, 2);
    w.slide(2);
    CHECK_FALSE(in_out_check(w));
    CHECK(w.reuse().frequencies.count(5) == 2);
    CHECK(w.reuse().frequencies.count(7) == 1);
  }
}

TEST_CASE("reused clusters rotate") {
  SensorWindow w = primed({2, 5, 2, 7}, 3);
  w.set_cluster_sequence(Labels{0, 1, 0, 2});
  w.centroids() = {2, 5, 7};
  w.slide(2);
  auto r = reuse_clusters(w);
  CHECK(r.assignments == Labels{1, 0, 2, 0});
  CHECK(r.centroids == Values{2, 5, 7});
  CHECK(r.reused);
  CHECK(r.trigger == Trigger::kInOut);
}

TEST_CASE("reuse never fires when the first distinct set changes") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    testgen::Gen gen(seed);
    const auto cap = static_cast<std::uint32_t>(gen.range(2, 25));
    const auto k = static_cast<std::uint32_t>(gen.range(1, 6));
    const auto alphabet = static_cast<std::uint32_t>(gen.range(1, 8));
    SensorWindow w(cap, k);
    for (int step = 0; step < 3000; ++step) {
      double v = w.is_full() && gen.coin() ? w[0] : gen.values(1, alphabet)[0];
      Values before(w.values().begin(), w.values().end());
      w.slide(v);
      if (!w.is_full()) continue;
      if (!w.reuse().ready || !w.prev_first()) {
        w.reuse() = scan_reuse_state(w.values(), k);
        continue;
      }
      const bool hit = in_out_check(w);
      Values after(w.values().begin(), w.values().end());
      auto set_of = [&](const Values& vs) {
        auto c = initial_centers(vs, k);
        std::sort(c.begin(), c.end());
        return c;
      };
      if (hit) CHECK(set_of(before) == set_of(after));
      ReuseState fresh = scan_reuse_state(w.values(), k);
      CHECK(fresh.frequencies == w.reuse().frequencies);
      CHECK(fresh.position == w.reuse().position);
    }
  }
}

TEST_CASE("sweep assignment equals nearest centroid") {
  Values sorted{1, 2, 9, 10};
  CHECK(sweep_assign(sorted, Values{1, 2}) == Labels{0, 1, 1, 1});

  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    CAPTURE(seed);
    testgen::Gen gen(seed);
    auto values = gen.coin() ? gen.values(gen.range(1, 50), 7) : gen.reals(gen.range(1, 50), -3, 3);
    std::sort(values.begin(), values.end());
    auto centroids = gen.coin() ? gen.values(gen.range(1, 8), 7) : gen.reals(gen.range(1, 8), -3, 3);
    auto got = sweep_assign(values, centroids);
    for (std::size_t i = 0; i < values.size(); ++i) {
      CHECK(got[i] == nearest_centroid(values[i], centroids));
    }
  }
}

TEST_CASE("sorted sweep k-means") {
  SensorWindow w(4, 2, true);
  for (double v : {1.0, 2.0, 9.0, 10.0}) w.slide(v);
  auto r = sorted_sweep_kmeans(*w.sorted(), w.values(), 2, 50);
  CHECK(r.assignments == Labels{0, 0, 1, 1});
  CHECK(r.centroids == Values{1.5, 9.5});
  CHECK(r.trigger == Trigger::kSorted);

  auto one = sorted_sweep_kmeans(*w.sorted(), w.values(), 1, 50);
  CHECK(one.centroids == Values{5.5});
  CHECK(one.assignments == Labels{0, 0, 0, 0});
}

TEST_CASE("partition equality up to relabeling") {
  CHECK(same_partition(Labels{0, 0, 1, 2}, Labels{2, 2, 0, 1}));
  CHECK_FALSE(same_partition(Labels{0, 0, 1, 2}, Labels{2, 2, 0, 0}));
  CHECK_FALSE(same_partition(Labels{0, 1, 1}, Labels{0, 0, 1}));
  CHECK_FALSE(same_partition(Labels{0, 1}, Labels{0, 1, 1}));
}
