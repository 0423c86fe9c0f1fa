#include <catch2/catch_amalgamated.hpp>

#include "nestprof/datagen.hpp"
#include "nestprof/json_parse.hpp"
#include "nestprof/json_write.hpp"
#include "nestprof/oracle.hpp"
#include "nestprof/unroll.hpp"

using namespace nestprof;

TEST_CASE("the same seed regenerates identical bytes") {
  GenSpec spec;
  spec.seed = 42;
  spec.n_docs = 50;
  spec.n_scalar_keys = 3;
  spec.n_array_keys = 2;
  spec.array_len = 3;
  spec.nesting_depth = 2;
  spec.planted.push_back(Plant{PlantKind::Nind, false, "", "", 0});
  CHECK(write_json_lines(generate(spec)) == write_json_lines(generate(spec)));

  GenSpec other = spec;
  other.seed = 43;
  CHECK(write_json_lines(generate(other)) != write_json_lines(generate(spec)));
}

TEST_CASE("expansion matches the closed form for sibling arrays") {
  for (std::size_t keys : {0u, 1u, 2u, 3u}) {
    for (std::size_t len : {1u, 2u, 4u}) {
      GenSpec spec;
      spec.seed = 9;
      spec.n_docs = 6;
      spec.n_array_keys = keys;
      spec.array_len = len;
      double expected = 1.0;
      for (std::size_t k = 0; k < keys; ++k) expected *= static_cast<double>(len);
      CHECK(expansion_factor(generate(spec)) == expected);
    }
  }
}

TEST_CASE("nesting wraps fields without changing leaf counts") {
  GenSpec spec;
  spec.seed = 10;
  spec.n_docs = 4;
  spec.nesting_depth = 3;
  const auto collection = generate(spec);
  const auto paths = enumerate_paths(collection);
  CHECK(paths.count(Path::parse("$.n0.n1.n2.s0")) == 1);
  CHECK(paths.count(Path::parse("$.s0")) == 0);
}

TEST_CASE("planted inclusion dependencies validate exactly") {
  GenSpec spec;
  spec.seed = 11;
  spec.n_docs = 30;
  spec.planted.push_back(Plant{PlantKind::Nind, false, "", "", 0});
  spec.planted.push_back(Plant{PlantKind::Nind, true, "", "", 0});
  spec.array_len = 2;
  const auto collection = generate(spec);
  for (const auto& plant : planted_dependencies(spec)) {
    const auto check = oracle::validate_nind(collection, plant.lhs, plant.rhs);
    CHECK(check.valid);
    CHECK(check.exact_strength == Rational::one());
  }
}

TEST_CASE("planted functional dependencies validate exactly") {
  GenSpec spec;
  spec.seed = 12;
  spec.n_docs = 24;
  spec.planted.push_back(Plant{PlantKind::Nfd, false, "", "", 6});
  const auto collection = generate(spec);
  const auto plant = planted_dependencies(spec)[0];
  CHECK(oracle::validate_nfd(collection, {plant.lhs}, {plant.rhs}));
}

TEST_CASE("violated inclusion plants land within one document of the rate") {
  for (double rate : {0.1, 0.2}) {
    GenSpec spec;
    spec.seed = 13;
    spec.n_docs = 40;
    spec.violation_rate = rate;
    spec.planted.push_back(Plant{PlantKind::Nind, false, "", "", 0});
    const auto collection = generate(spec);
    const auto plant = planted_dependencies(spec)[0];
    const auto check = oracle::validate_nind(collection, plant.lhs, plant.rhs);
    CHECK(!check.valid);
    const double strength = check.exact_strength.to_double();
    CHECK(std::abs(strength - (1.0 - rate)) <= 1.0 / static_cast<double>(spec.n_docs));
  }
}

TEST_CASE("violated functional plants land within one document of the rate") {
  for (double rate : {0.1, 0.2}) {
    GenSpec spec;
    spec.seed = 14;
    spec.n_docs = 20;
    spec.violation_rate = rate;
    spec.planted.push_back(Plant{PlantKind::Nfd, false, "", "", 5});
    const auto collection = generate(spec);
    const auto plant = planted_dependencies(spec)[0];
    CHECK(!oracle::validate_nfd(collection, {plant.lhs}, {plant.rhs}));
    const ViolationGraph graph =
        oracle::nfd_violations(collection, {plant.lhs}, plant.rhs);
    const std::size_t cover = oracle::exact_min_vertex_cover(graph);
    const double strength = strength_from_cover(cover, spec.n_docs).to_double();
    CHECK(std::abs(strength - (1.0 - rate)) <= 1.0 / static_cast<double>(spec.n_docs));
  }
}

TEST_CASE("plants claiming the same field are rejected") {
  GenSpec spec;
  spec.planted.push_back(Plant{PlantKind::Nind, false, "x", "y", 0});
  spec.planted.push_back(Plant{PlantKind::Nind, false, "y", "x", 0});
  CHECK_THROWS_AS(generate(spec), GenerationError);

  GenSpec self;
  self.planted.push_back(Plant{PlantKind::Nind, false, "same", "same", 0});
  CHECK_THROWS_AS(generate(self), GenerationError);
}

TEST_CASE("structural parameters are validated") {
  GenSpec spec;
  spec.n_docs = 0;
  CHECK_THROWS_AS(generate(spec), GenerationError);
  spec.n_docs = 1;
  spec.array_len = 0;
  CHECK_THROWS_AS(generate(spec), GenerationError);
  spec.array_len = 1;
  spec.violation_rate = 1.0;
  CHECK_THROWS_AS(generate(spec), GenerationError);
}

TEST_CASE("generator config parses from json") {
  const auto json = parse_json_text(std::string_view(
      "{\"seed\": 7, \"n_docs\": 12, \"n_scalar_keys\": 1, \"n_array_keys\": 2,"
      " \"array_len\": 3, \"nesting_depth\": 1, \"domain_size\": 9,"
      " \"violation_rate\": 0.25,"
      " \"planted\": [{\"kind\": \"nind\", \"array\": true},"
      "               {\"kind\": \"nfd\", \"groups\": 4}]}"));
  const GenSpec spec = gen_spec_from_json(json);
  CHECK(spec.seed == 7);
  CHECK(spec.n_docs == 12);
  CHECK(spec.n_array_keys == 2);
  CHECK(spec.array_len == 3);
  CHECK(spec.nesting_depth == 1);
  CHECK(spec.domain_size == 9);
  CHECK(spec.violation_rate == 0.25);
  REQUIRE(spec.planted.size() == 2);
  CHECK(spec.planted[0].kind == PlantKind::Nind);
  CHECK(spec.planted[0].array);
  CHECK(spec.planted[1].kind == PlantKind::Nfd);
  CHECK(spec.planted[1].groups == 4);

  CHECK_THROWS_AS(
      gen_spec_from_json(parse_json_text(std::string_view("{\"bogus\": 1}"))),
      GenerationError);
  CHECK_THROWS_AS(gen_spec_from_json(parse_json_text(std::string_view("[1]"))),
                  GenerationError);
}
