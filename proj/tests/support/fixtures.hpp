#pragma once

#include <string_view>

#include "nestprof/json_parse.hpp"

namespace nestprof::testing {

/// Four documents with overlapping array values under "a" and "b".
/// Values at a: {X, Y}; at b: {X, Y, Z}. So b <= a has strength 2/3,
/// a <= b is exact, and a -> b is violated by pairs (2,3), (1,4), (3,4)
/// while b -> a holds exactly.
inline DocumentCollection overlap_collection() {
  constexpr std::string_view text =
      "{\"a\": [\"X\"], \"b\": [\"X\", \"Y\"]}\n"
      "{\"a\": [\"X\", \"Y\"], \"b\": [\"X\", \"Z\"]}\n"
      "{\"a\": [\"X\"], \"b\": [\"Y\"]}\n"
      "{\"a\": [\"X\"], \"b\": [\"Z\"]}\n";
  return parse_collection(text, InputFormat::JsonLines);
}

/// Small reference graph: ids, optional parents, reference arrays, and
/// category-style fields. parent and rel[*] both point into id.
inline DocumentCollection refs_collection() {
  constexpr std::string_view text =
      "{\"id\": 2, \"parent\": 5, \"rel\": [3, 5], \"main\": \"A\", \"types\": [\"A\"]}\n"
      "{\"id\": 3, \"rel\": [2], \"main\": \"D\", \"types\": [\"D\"]}\n"
      "{\"id\": 4, \"parent\": 2, \"rel\": [2], \"main\": \"C\", \"types\": [\"A\", \"C\"]}\n"
      "{\"id\": 5, \"related\": [2], \"main\": \"B\", \"types\": [\"B\", \"C\"]}\n";
  return parse_collection(text, InputFormat::JsonLines);
}

inline constexpr std::string_view kProductJson =
    "{"
    "\"asin\": \"B007IJKOMK\","
    "\"salesRank\": {\"Music\": 513528},"
    "\"related\": {\"also_viewed\": [\"B00284G31G\", \"B001HADE96\"],"
    " \"buy_after_viewing\": [\"B001HADE96\"]},"
    "\"categories\": [[\"CDs & Vinyl\", \"Classical\"],"
    " [\"Musical Instruments\", \"Instrument Acc.\"]]"
    "}";

/// One product-catalog style document: nested objects, sibling arrays,
/// and an array of arrays. Statically unrolls to four rows.
inline DocumentCollection product_collection() {
  const std::string text = "[" + std::string(kProductJson) + "]";
  return parse_collection(std::string_view(text), InputFormat::JsonArray);
}

inline JsonValue product_document() { return product_collection()[0].root; }

}  // namespace nestprof::testing
