#include <doctest.h>

#include <map>

#include "streamad/modeling.hpp"
#include "support.hpp"

using namespace streamad;

using Labels = std::vector<ClusterIndex>;

TEST_CASE("transition counts") {
  auto c = count_transitions(Labels{0, 0, 1, 1, 0});
  CHECK(c.pair_count({0, 0}) == 1);
  CHECK(c.pair_count({0, 1}) == 1);
  CHECK(c.pair_count({1, 1}) == 1);
  CHECK(c.pair_count({1, 0}) == 1);
  CHECK(c.distinct_pairs() == 4);
  CHECK(c.from_total(0) == 2);
  CHECK(c.from_total(1) == 2);

  auto flat = count_transitions(Labels{0, 0, 0, 0});
  CHECK(flat.pair_count({0, 0}) == 3);
  CHECK(flat.distinct_pairs() == 1);
  CHECK(flat.from_total(0) == 3);
}

TEST_CASE("totals sum to W - 1") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testgen::Gen gen(seed);
    auto seq = gen.labels(gen.range(2, 200), static_cast<std::uint32_t>(gen.range(1, 9)));
    auto c = count_transitions(seq);
    CHECK(c.total_transitions() == seq.size() - 1);
    std::size_t sum = 0;
    for (ClusterIndex a = 0; a < 9; ++a) sum += c.from_total(a);
    CHECK(sum == seq.size() - 1);
  }
}

TEST_CASE("shift update") {
  auto c = count_transitions(Labels{0, 1, 0, 1});
  shift_counts(c, {0, 1}, {1, 0});
  CHECK(c == count_transitions(Labels{1, 0, 1, 0}));

  auto before = count_transitions(Labels{0, 0, 1});
  auto same = before;
  shift_counts(same, {0, 0}, {0, 0});
  CHECK(same == before);

  CHECK_THROWS_AS(shift_counts(c, {7, 7}, {0, 0}), ConsistencyError);
}

TEST_CASE("transition probabilities") {
  auto c = count_transitions(Labels{0, 0, 1, 1, 0});
  CHECK(transition_probability(c, 0, 0) == 0.5);
  CHECK(transition_probability(count_transitions(Labels{3, 3, 3}), 3, 3) == 1.0);
  CHECK(transition_probability(count_transitions(Labels{0, 0, 0, 0}), 0, 1) == 0.0);
  CHECK_THROWS_AS(transition_probability(c, 9, 0), std::out_of_range);
}

TEST_CASE("detection") {
  Labels a{0, 0, 1, 1, 0};
  auto ca = count_transitions(a);
  CHECK(composed_probability(a, ca, 5).probability == 0.0625);
  CHECK_FALSE(detect(a, ca, 5, 0.005));

  Labels b{0, 0, 0, 0, 1};
  auto cb = count_transitions(b);
  auto p = composed_probability(b, cb, 5);
  CHECK(p.steps == 4);
  CHECK(p.divisions == 2);
  CHECK(p.probability == 27.0 / 256.0);
  CHECK_FALSE(detect(b, cb, 5, 0.1));
  CHECK(detect(b, cb, 5, 0.2) == 27.0 / 256.0);
  // Strict comparison at the boundary.
  CHECK_FALSE(detect(b, cb, 5, 27.0 / 256.0));

  Labels flat(10, 4);
  CHECK_FALSE(detect(flat, count_transitions(flat), 5, 1.0));

  // Only the last N pairs count.
  Labels tail{0, 0, 0, 0, 0, 0, 1};
  auto ct = count_transitions(tail);
  CHECK(composed_probability(tail, ct, 2).probability == (5.0 / 6.0) * (1.0 / 6.0));
  CHECK(composed_probability(tail, ct, 1).probability == 1.0 / 6.0);
}

TEST_CASE("detection is label permutation invariant") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    CAPTURE(seed);
    testgen::Gen gen(seed);
    const auto k = static_cast<std::uint32_t>(gen.range(1, 6));
    auto seq = gen.labels(gen.range(2, 40), k);
    std::vector<ClusterIndex> perm(k);
    for (ClusterIndex i = 0; i < k; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), gen.engine());
    Labels relabeled(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) relabeled[i] = perm[seq[i]];
    const auto n = static_cast<std::uint32_t>(gen.range(1, 8));
    auto p = composed_probability(seq, count_transitions(seq), n);
    auto q = composed_probability(relabeled, count_transitions(relabeled), n);
    CHECK(p.probability == q.probability);
    CHECK(p.probability >= 0.0);
    CHECK(p.probability <= 1.0);
    CHECK(p.steps == std::min<std::size_t>(n, seq.size() - 1));
    CHECK(p.divisions <= p.steps);
  }
}

TEST_CASE("division count matches distinct tail pairs") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testgen::Gen gen(seed);
    auto seq = gen.labels(gen.range(2, 60), static_cast<std::uint32_t>(gen.range(1, 5)));
    const auto n = static_cast<std::uint32_t>(gen.range(1, 30));
    auto p = composed_probability(seq, count_transitions(seq), n);
    std::map<std::pair<ClusterIndex, ClusterIndex>, int> distinct;
    for (std::size_t i = seq.size() - 1 - p.steps; i + 1 < seq.size(); ++i) distinct[{seq[i], seq[i + 1]}]++;
    CHECK(p.divisions == distinct.size());
  }
}
