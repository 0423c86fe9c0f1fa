#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>
#include <tuple>

#include "nestprof/datagen.hpp"
#include "nestprof/json_parse.hpp"
#include "nestprof/path_eval.hpp"
#include "nestprof/unroll.hpp"
#include "support/fixtures.hpp"
#include "support/random_docs.hpp"

using namespace nestprof;
using nestprof::testing::product_collection;
using nestprof::testing::product_document;

namespace {

using CellMap = std::map<std::string, std::optional<Atom>>;

CellMap cells_of(const FlatFragment& fragment) {
  CellMap out;
  for (const auto& [path, atom] : fragment) out[path.serialize()] = atom;
  return out;
}

struct RecordingSink {
  std::vector<std::tuple<DocId, std::string, Atom>> calls;
  void update(DocId id, const Path& path, const Atom& value) {
    calls.emplace_back(id, path.serialize(), value);
  }
  void merge(RecordingSink& other) {
    calls.insert(calls.end(), other.calls.begin(), other.calls.end());
  }
  explicit RecordingSink(MemoryBudget* = nullptr) {}
};

// Leaf (path, value) pairs under the static path naming: wildcard for
// array elements, positional indexes for arrays directly inside arrays.
// Independent of the flatten implementation.
void leaf_walk(const JsonValue& node, const Path& path, bool parent_is_array,
               std::multiset<std::pair<std::string, Atom>>& out) {
  if (node.is_atom()) {
    out.insert({path.serialize(), node.as_atom()});
  } else if (node.is_object()) {
    for (const auto& [key, child] : node.as_object())
      leaf_walk(child, path.key(key), false, out);
  } else if (node.is_array()) {
    const auto& elems = node.as_array();
    if (parent_is_array) {
      for (std::size_t i = 0; i < elems.size(); ++i)
        leaf_walk(elems[i], path.index(static_cast<std::uint32_t>(i)), false, out);
    } else {
      for (const JsonValue& e : elems) leaf_walk(e, path.wildcard(), true, out);
    }
  }
}

}  // namespace

TEST_CASE("flattening the product document yields the four expected rows") {
  const auto fragments = flatten(Path::root(), product_document());
  REQUIRE(fragments.size() == 4);

  const std::set<std::string> expected_columns{
      "$.asin",
      "$.salesRank.Music",
      "$.related.also_viewed[*]",
      "$.related.buy_after_viewing[*]",
      "$.categories[*][0]",
      "$.categories[*][1]"};
  for (const auto& fragment : fragments) {
    std::set<std::string> columns;
    for (const auto& [path, atom] : fragment) columns.insert(path.serialize());
    CHECK(columns == expected_columns);
  }

  // Earlier keys alternate fastest: also_viewed flips per row, the
  // category pair flips halfway.
  auto row = cells_of(fragments[0]);
  CHECK(*row["$.related.also_viewed[*]"] == Atom::string("B00284G31G"));
  CHECK(*row["$.categories[*][0]"] == Atom::string("CDs & Vinyl"));
  CHECK(*row["$.categories[*][1]"] == Atom::string("Classical"));
  row = cells_of(fragments[1]);
  CHECK(*row["$.related.also_viewed[*]"] == Atom::string("B001HADE96"));
  CHECK(*row["$.categories[*][0]"] == Atom::string("CDs & Vinyl"));
  row = cells_of(fragments[2]);
  CHECK(*row["$.related.also_viewed[*]"] == Atom::string("B00284G31G"));
  CHECK(*row["$.categories[*][0]"] == Atom::string("Musical Instruments"));
  CHECK(*row["$.categories[*][1]"] == Atom::string("Instrument Acc."));
  row = cells_of(fragments[3]);
  CHECK(*row["$.related.buy_after_viewing[*]"] == Atom::string("B001HADE96"));
  CHECK(*row["$.asin"] == Atom::string("B007IJKOMK"));
}

TEST_CASE("an unnested object flattens to a single row") {
  const auto fragments =
      flatten(Path::root(), parse_json_text(std::string_view("{\"a\": 1}")));
  REQUIRE(fragments.size() == 1);
  const auto row = cells_of(fragments[0]);
  REQUIRE(row.size() == 1);
  CHECK(*row.at("$.a") == Atom::integer(1));
}

TEST_CASE("sibling arrays produce the full cross product") {
  const auto doc = parse_json_text(std::string_view("{\"a\":[1,2],\"b\":[3,4]}"));
  const auto fragments = flatten(Path::root(), doc);

  // Brute-force expectation: every (a element, b element) combination.
  std::set<std::pair<std::int64_t, std::int64_t>> expected;
  for (std::int64_t a : {1, 2})
    for (std::int64_t b : {3, 4}) expected.insert({a, b});

  REQUIRE(fragments.size() == expected.size());
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const auto& fragment : fragments) {
    const auto row = cells_of(fragment);
    seen.insert({row.at("$.a[*]")->as_int(), row.at("$.b[*]")->as_int()});
  }
  CHECK(seen == expected);
}

TEST_CASE("empty values leave a single placeholder cell") {
  const auto doc = parse_json_text(std::string_view("{\"a\": null, \"b\": [], \"c\": 1}"));
  const auto fragments = flatten(Path::root(), doc);
  REQUIRE(fragments.size() == 1);
  const auto row = cells_of(fragments[0]);
  CHECK(!row.at("$.a").has_value());
  CHECK(!row.at("$.b").has_value());
  CHECK(*row.at("$.c") == Atom::integer(1));
}

TEST_CASE("static unrolling of the product collection expands fourfold") {
  const FlatTable table = static_unroll(product_collection());
  CHECK(table.rows().size() == 4);
  CHECK(table.expansion_factor() == 4.0);
  CHECK(table.rows()[0].doc_id == 1);
  CHECK(table.column_names() ==
        std::vector<std::string>{"$.asin", "$.categories[*][0]", "$.categories[*][1]",
                                 "$.related.also_viewed[*]",
                                 "$.related.buy_after_viewing[*]", "$.salesRank.Music"});
}

TEST_CASE("array-free collections do not expand") {
  const auto collection = parse_collection(
      std::string_view("{\"a\":1,\"o\":{\"b\":2}}\n{\"a\":3}\n"), InputFormat::JsonLines);
  const FlatTable table = static_unroll(collection);
  CHECK(table.rows().size() == collection.size());
  CHECK(table.expansion_factor() == 1.0);
}

TEST_CASE("two independent length-10 arrays expand a hundredfold") {
  GenSpec spec;
  spec.seed = 5;
  spec.n_docs = 20;
  spec.n_scalar_keys = 2;
  spec.n_array_keys = 2;
  spec.array_len = 10;
  const auto collection = generate(spec);
  const FlatTable table = static_unroll(collection);
  CHECK(table.expansion_factor() == 100.0);
  CHECK(expansion_factor(collection) == 100.0);
  CHECK(static_row_count(collection) == table.rows().size());
}

TEST_CASE("length-1 arrays sit exactly on the no-expansion boundary") {
  GenSpec spec;
  spec.seed = 6;
  spec.n_docs = 10;
  spec.n_array_keys = 2;
  spec.array_len = 1;
  CHECK(expansion_factor(generate(spec)) == 1.0);
}

TEST_CASE("dynamic unrolling emits one update per leaf occurrence") {
  const auto collection = parse_collection(
      std::string_view("{\"a\":{\"b\":1},\"c\":[2,3]}"), InputFormat::JsonLines);
  RecordingSink sink;
  const std::uint64_t updates = dynamic_unroll(collection, sink);
  CHECK(updates == 3);
  REQUIRE(sink.calls.size() == 3);
  CHECK(sink.calls[0] == std::tuple<DocId, std::string, Atom>{1, "$.a.b", Atom::integer(1)});
  CHECK(sink.calls[1] == std::tuple<DocId, std::string, Atom>{1, "$.c[*]", Atom::integer(2)});
  CHECK(sink.calls[2] == std::tuple<DocId, std::string, Atom>{1, "$.c[*]", Atom::integer(3)});
}

TEST_CASE("dynamic unrolling reaches nested object and array leaves") {
  RecordingSink sink;
  dynamic_unroll(product_collection(), sink);
  const std::tuple<DocId, std::string, Atom> viewed{1, "$.related.also_viewed[*]",
                                                    Atom::string("B00284G31G")};
  const std::tuple<DocId, std::string, Atom> rank{1, "$.salesRank.Music",
                                                  Atom::integer(513528)};
  CHECK(std::count(sink.calls.begin(), sink.calls.end(), viewed) == 1);
  CHECK(std::count(sink.calls.begin(), sink.calls.end(), rank) == 1);
}

TEST_CASE("null and empty containers produce no updates") {
  const auto collection = parse_collection(
      std::string_view("{\"a\": null, \"b\": []}"), InputFormat::JsonLines);
  RecordingSink sink;
  CHECK(dynamic_unroll(collection, sink) == 0);
  CHECK(sink.calls.empty());
}

TEST_CASE("repeated identical values fire repeated updates") {
  const auto collection =
      parse_collection(std::string_view("{\"a\":[\"X\",\"X\"]}"), InputFormat::JsonLines);
  RecordingSink sink;
  CHECK(dynamic_unroll(collection, sink) == 2);
}

TEST_CASE("dynamic updates carry exactly the document leaves") {
  // Without arrays-in-arrays the static path naming agrees with dynamic
  // unrolling, so the update stream must equal an independent leaf walk.
  std::mt19937_64 rng(31);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.max_docs = 15;
  for (int trial = 0; trial < 25; ++trial) {
    const auto collection = nestprof::testing::random_collection(rng, cfg);
    std::multiset<std::pair<std::string, Atom>> expected;
    for (const Document& doc : collection)
      leaf_walk(doc.root, Path::root(), false, expected);
    RecordingSink sink;
    dynamic_unroll(collection, sink);
    std::multiset<std::pair<std::string, Atom>> seen;
    for (const auto& [id, path, value] : sink.calls) seen.insert({path, value});
    CHECK(seen == expected);
  }
}

TEST_CASE("static rows hold the same distinct cells as the dynamic stream") {
  std::mt19937_64 rng(37);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.max_docs = 12;
  for (int trial = 0; trial < 25; ++trial) {
    const auto collection = nestprof::testing::random_collection(rng, cfg);
    const FlatTable table = static_unroll(collection);
    std::set<std::tuple<DocId, std::string, Atom>> from_rows;
    for (const auto& row : table.rows())
      for (std::size_t c = 0; c < table.columns().size(); ++c)
        if (const Atom* a = table.cell(row, c))
          from_rows.insert({row.doc_id, table.column_names()[c], *a});
    RecordingSink sink;
    dynamic_unroll(collection, sink);
    std::set<std::tuple<DocId, std::string, Atom>> from_stream(sink.calls.begin(),
                                                               sink.calls.end());
    CHECK(from_rows == from_stream);
    CHECK(table.expansion_factor() >= 1.0);
  }
}

TEST_CASE("array-free collections give identical static and dynamic triples") {
  std::mt19937_64 rng(41);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.allow_arrays = false;
  for (int trial = 0; trial < 25; ++trial) {
    const auto collection = nestprof::testing::random_collection(rng, cfg);
    const FlatTable table = static_unroll(collection);
    REQUIRE(table.rows().size() == collection.size());
    std::multiset<std::tuple<DocId, std::string, Atom>> from_rows;
    for (const auto& row : table.rows())
      for (std::size_t c = 0; c < table.columns().size(); ++c)
        if (const Atom* a = table.cell(row, c))
          from_rows.insert({row.doc_id, table.column_names()[c], *a});
    RecordingSink sink;
    dynamic_unroll(collection, sink);
    std::multiset<std::tuple<DocId, std::string, Atom>> from_stream(sink.calls.begin(),
                                                                    sink.calls.end());
    CHECK(from_rows == from_stream);
  }
}

TEST_CASE("csv export lists sorted columns and blank nulls") {
  const auto collection = parse_collection(
      std::string_view("{\"b\":1,\"a\":\"x,y\"}\n{\"b\":null}\n"), InputFormat::JsonLines);
  const std::string csv = write_csv(static_unroll(collection));
  CHECK(csv ==
        "doc_id,$.a,$.b\n"
        "1,\"x,y\",1\n"
        "2,,\n");
}

TEST_CASE("parallel static unrolling matches single-threaded output") {
  std::mt19937_64 rng(43);
  nestprof::testing::RandomDocsConfig cfg;
  cfg.max_docs = 40;
  const auto collection = nestprof::testing::random_collection(rng, cfg);
  const FlatTable one = static_unroll(collection, 1);
  const FlatTable four = static_unroll(collection, 4);
  CHECK(write_csv(one) == write_csv(four));
}
