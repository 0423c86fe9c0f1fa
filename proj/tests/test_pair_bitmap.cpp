#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "nestprof/pair_bitmap.hpp"

using namespace nestprof;

TEST_CASE("pair indexes enumerate grouped by the larger id") {
  CHECK(pair_index(1, 2) == 0);
  CHECK(pair_index(1, 3) == 1);
  CHECK(pair_index(2, 3) == 2);
  CHECK(pair_index(1, 4) == 3);
  CHECK(pair_index(2, 4) == 4);
  CHECK(pair_index(3, 4) == 5);
}

TEST_CASE("pair index decoding inverts encoding") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint32_t j = 2 + static_cast<std::uint32_t>(rng() % 60000);
    const std::uint32_t i = 1 + static_cast<std::uint32_t>(rng() % (j - 1));
    const auto [di, dj] = pair_from_index(pair_index(i, j));
    CHECK(di == i);
    CHECK(dj == j);
  }
}

namespace {

std::vector<std::uint64_t> random_indices(std::mt19937_64& rng, std::size_t count,
                                          std::uint64_t span) {
  std::set<std::uint64_t> out;
  while (out.size() < count) out.insert(rng() % span);
  return {out.begin(), out.end()};
}

PairBitmap build(const std::vector<std::uint64_t>& sorted) {
  return PairBitmap::from_sorted(sorted);
}

}  // namespace

TEST_CASE("bitmap operations agree with a reference set") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    // Mix sparse and dense chunks: spans small enough to push containers
    // past the dense threshold in some trials.
    const std::uint64_t span = (trial % 2) ? 9000 : 400000;
    const std::size_t na = 1 + rng() % 6000;
    const std::size_t nb = 1 + rng() % 6000;
    const auto va = random_indices(rng, na, span);
    const auto vb = random_indices(rng, nb, span);
    const std::set<std::uint64_t> sa(va.begin(), va.end());
    const std::set<std::uint64_t> sb(vb.begin(), vb.end());

    const PairBitmap a = build(va);
    const PairBitmap b = build(vb);
    CHECK(a.cardinality() == sa.size());

    std::vector<std::uint64_t> expect_and;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(expect_and));
    CHECK(a.intersect(b).to_vector() == expect_and);

    std::vector<std::uint64_t> expect_diff;
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(expect_diff));
    CHECK(a.difference(b).to_vector() == expect_diff);

    const bool expect_subset =
        std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
    CHECK(a.is_subset_of(b) == expect_subset);
    CHECK(a.intersect(b).is_subset_of(a));
    CHECK(a.intersect(b).is_subset_of(b));

    PairBitmap u = a;
    u.union_with(b);
    std::vector<std::uint64_t> expect_or;
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(),
                   std::back_inserter(expect_or));
    CHECK(u.to_vector() == expect_or);
  }
}

TEST_CASE("shrinking operations normalize containers so equality works") {
  // Two dense containers whose intersection is small must compare equal
  // to the same set built directly in array form.
  std::vector<std::uint64_t> big_a, big_b;
  for (std::uint64_t i = 0; i < 6000; ++i) big_a.push_back(i * 2);        // evens
  for (std::uint64_t i = 0; i < 6000; ++i) big_b.push_back(i * 3);        // multiples of 3
  const PairBitmap a = build(big_a);
  const PairBitmap b = build(big_b);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t v : big_a)
    if (v % 3 == 0) expect.push_back(v);
  CHECK(a.intersect(b) == build(expect));
}

TEST_CASE("membership and incremental add") {
  PairBitmap bm;
  CHECK(bm.empty());
  bm.add(7);
  bm.add(70000);
  bm.add(7);
  CHECK(bm.cardinality() == 2);
  CHECK(bm.contains(7));
  CHECK(bm.contains(70000));
  CHECK(!bm.contains(8));
  CHECK(bm == build({7, 70000}));
}
