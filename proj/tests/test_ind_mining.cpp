#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "nestprof/ind_mining.hpp"
#include "nestprof/json_parse.hpp"
#include "support/fixtures.hpp"
#include "support/oracle_sets.hpp"
#include "support/random_docs.hpp"

using namespace nestprof;
using nestprof::testing::overlap_collection;
using nestprof::testing::refs_collection;

namespace {

const Nind* find_dep(const std::vector<Nind>& deps, const std::string& lhs,
                     const std::string& rhs) {
  for (const Nind& d : deps)
    if (d.lhs.serialize() == lhs && d.rhs.serialize() == rhs) return &d;
  return nullptr;
}

}  // namespace

TEST_CASE("spider metadata holds sorted distinct values per path") {
  const SpiderMeta meta = spider_collect(overlap_collection());
  REQUIRE(meta.size() == 2);
  CHECK(meta.at(Path::parse("$.a[*]")) ==
        std::vector<Atom>{Atom::string("X"), Atom::string("Y")});
  CHECK(meta.at(Path::parse("$.b[*]")) ==
        std::vector<Atom>{Atom::string("X"), Atom::string("Y"), Atom::string("Z")});

  const SpiderMeta refs_meta = spider_collect(refs_collection());
  CHECK(refs_meta.at(Path::parse("$.parent")) ==
        std::vector<Atom>{Atom::integer(2), Atom::integer(5)});
}

TEST_CASE("empty collections collect nothing and refuse to mine") {
  const DocumentCollection empty;
  const SpiderMeta meta = spider_collect(empty);
  CHECK(meta.empty());
  CHECK_THROWS_AS(spider_mine(meta, Threshold{}), MiningError);
  CHECK_THROWS_AS(demarchi_mine(DeMarchiMeta{}, Threshold{}), MiningError);
}

TEST_CASE("spider scores partial inclusions by distinct values") {
  const auto deps = spider_mine(spider_collect(overlap_collection()),
                                Threshold{Rational(3, 5)});
  const Nind* b_in_a = find_dep(deps, "$.b[*]", "$.a[*]");
  REQUIRE(b_in_a);
  CHECK(b_in_a->strength == Rational(2, 3));
  CHECK(b_in_a->satisfied);

  const Nind* a_in_b = find_dep(deps, "$.a[*]", "$.b[*]");
  REQUIRE(a_in_b);
  CHECK(a_in_b->strength == Rational::one());
  CHECK(a_in_b->satisfied);
}

TEST_CASE("atomic references mine like classic inclusion dependencies") {
  const auto deps = spider_mine(spider_collect(refs_collection()), Threshold{});
  const Nind* parent_in_id = find_dep(deps, "$.parent", "$.id");
  REQUIRE(parent_in_id);
  CHECK(parent_in_id->strength == Rational::one());
  CHECK(parent_in_id->satisfied);

  const Nind* rel_in_id = find_dep(deps, "$.rel[*]", "$.id");
  REQUIRE(rel_in_id);
  CHECK(rel_in_id->strength == Rational::one());
}

TEST_CASE("reflexive inclusion is internally exact") {
  const SpiderMeta meta = spider_collect(overlap_collection());
  for (const auto& [path, values] : meta)
    CHECK(inclusion_strength(values, values) == Rational::one());
}

TEST_CASE("demarchi metadata inverts the map direction") {
  const DeMarchiMeta meta = demarchi_collect(overlap_collection());
  CHECK(meta.at(Atom::string("X")) ==
        std::set<Path>{Path::parse("$.a[*]"), Path::parse("$.b[*]")});
  CHECK(meta.at(Atom::string("Z")) == std::set<Path>{Path::parse("$.b[*]")});

  const auto single =
      parse_collection(std::string_view("{\"k\": 1}"), InputFormat::JsonLines);
  const DeMarchiMeta single_meta = demarchi_collect(single);
  REQUIRE(single_meta.size() == 1);
  CHECK(single_meta.at(Atom::integer(1)) == std::set<Path>{Path::parse("$.k")});
}

TEST_CASE("a single-path collection yields no dependencies") {
  const auto single =
      parse_collection(std::string_view("{\"k\": 1}\n{\"k\": 2}\n"), InputFormat::JsonLines);
  CHECK(spider_mine(spider_collect(single), Threshold{}).empty());
  CHECK(demarchi_mine(demarchi_collect(single), Threshold{}).empty());
}

TEST_CASE("spider and demarchi agree dependency for dependency") {
  const Threshold threshold{Rational(1, 2)};
  std::mt19937_64 rng(47);
  nestprof::testing::RandomDocsConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    const auto collection = nestprof::testing::random_collection(rng, cfg);
    if (enumerate_paths(collection).empty()) continue;
    const auto spider = spider_mine(spider_collect(collection), threshold);
    const auto demarchi = demarchi_mine(demarchi_collect(collection), threshold);
    REQUIRE(spider.size() == demarchi.size());
    for (std::size_t i = 0; i < spider.size(); ++i) {
      CHECK(spider[i].lhs == demarchi[i].lhs);
      CHECK(spider[i].rhs == demarchi[i].rhs);
      CHECK(spider[i].strength == demarchi[i].strength);
      CHECK(spider[i].satisfied == demarchi[i].satisfied);
    }
  }
}

TEST_CASE("strength ignores document order and value duplication") {
  const auto base = overlap_collection();
  const auto deps = spider_mine(spider_collect(base), Threshold{});

  // Reversed document order.
  DocumentCollection reversed;
  for (auto it = base.documents().rbegin(); it != base.documents().rend(); ++it)
    reversed.append(it->root);
  CHECK(spider_mine(spider_collect(reversed), Threshold{}) == deps);

  // Every array value repeated.
  const auto duplicated = parse_collection(
      std::string_view("{\"a\": [\"X\",\"X\"], \"b\": [\"X\", \"Y\", \"Y\"]}\n"
                       "{\"a\": [\"X\", \"Y\"], \"b\": [\"X\", \"Z\"]}\n"
                       "{\"a\": [\"X\"], \"b\": [\"Y\"]}\n"
                       "{\"a\": [\"X\"], \"b\": [\"Z\", \"Z\"]}\n"),
      InputFormat::JsonLines);
  CHECK(spider_mine(spider_collect(duplicated), Threshold{}) == deps);
}

TEST_CASE("cross-type values never match") {
  const auto collection = parse_collection(
      std::string_view("{\"a\": 1, \"b\": \"1\"}\n{\"a\": 2, \"b\": \"2\"}\n"),
      InputFormat::JsonLines);
  const auto deps = spider_mine(spider_collect(collection), Threshold{});
  const Nind* a_in_b = find_dep(deps, "$.a", "$.b");
  REQUIRE(a_in_b);
  CHECK(a_in_b->strength == Rational::zero());
  CHECK(!a_in_b->satisfied);
}

TEST_CASE("exact-mode miners match the oracle on random collections") {
  const Threshold exact{Rational::one()};
  std::mt19937_64 rng(53);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.max_docs = 20;
  for (int trial = 0; trial < 20; ++trial) {
    const auto collection = nestprof::testing::random_collection(rng, cfg);
    if (enumerate_paths(collection).empty()) continue;
    const auto oracle_set = nestprof::testing::oracle_nind_set(collection);
    const auto deps = spider_mine(spider_collect(collection), exact);
    CHECK(nestprof::testing::satisfied_nind_set(deps) == oracle_set);
    for (const Nind& dep : deps)
      CHECK(dep.strength ==
            oracle::validate_nind(collection, dep.lhs, dep.rhs).exact_strength);
  }
}

TEST_CASE("exact-mode output is transitively closed") {
  const Threshold exact{Rational::one()};
  std::mt19937_64 rng(107);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.max_docs = 15;
  for (int trial = 0; trial < 20; ++trial) {
    const auto collection = nestprof::testing::random_collection(rng, cfg);
    if (enumerate_paths(collection).empty()) continue;
    const auto satisfied = nestprof::testing::satisfied_nind_set(
        spider_mine(spider_collect(collection), exact));
    for (const auto& [p1, p2] : satisfied)
      for (const auto& [q1, q2] : satisfied)
        if (p2 == q1 && p1 != q2) CHECK(satisfied.count({p1, q2}) == 1);
  }
}

TEST_CASE("demarchi path sets cover exactly the attribute universe") {
  std::mt19937_64 rng(109);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.max_docs = 15;
  for (int trial = 0; trial < 20; ++trial) {
    const auto collection = nestprof::testing::random_collection(rng, cfg);
    const DeMarchiMeta meta = demarchi_collect(collection);
    std::set<Path> universe;
    for (const auto& [value, paths] : meta) {
      CHECK(!paths.empty());
      universe.insert(paths.begin(), paths.end());
    }
    CHECK(universe == enumerate_paths(collection));
  }
}

TEST_CASE("worker sharding leaves collected metadata unchanged") {
  std::mt19937_64 rng(59);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.max_docs = 40;
  const auto collection = nestprof::testing::random_collection(rng, cfg);
  CHECK(spider_collect(collection, 1) == spider_collect(collection, 4));
  CHECK(demarchi_collect(collection, 1) == demarchi_collect(collection, 4));
}

TEST_CASE("static and dynamic collection build the same metadata map") {
  std::mt19937_64 rng(131);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.allow_arrays = false;
  for (int trial = 0; trial < 10; ++trial) {
    const auto collection = nestprof::testing::random_collection(rng, cfg);
    const FlatTable table = static_unroll(collection);
    CHECK(spider_collect(table) == spider_collect(collection));
    CHECK(demarchi_collect(table) == demarchi_collect(collection));
  }
}

TEST_CASE("placeholder cells never reach mining metadata") {
  const auto collection = parse_collection(
      std::string_view("{\"x\": null, \"k\": 1}\n{\"k\": 2, \"e\": []}\n"),
      InputFormat::JsonLines);
  const FlatTable table = static_unroll(collection);
  CHECK(table.column_names() == std::vector<std::string>{"$.e", "$.k", "$.x"});
  const SpiderMeta meta = spider_collect(table);
  REQUIRE(meta.size() == 1);
  CHECK(meta.count(Path::parse("$.k")) == 1);
}
