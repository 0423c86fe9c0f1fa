#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nestprof/errors.hpp"
#include "nestprof/json_value.hpp"
#include "nestprof/path.hpp"

namespace nestprof {

enum class PlantKind { Nind, Nfd };

/// A dependency to embed in generated data. Plants get their own fresh
/// fields (auto-named unless overridden) and their own slice of the value
/// space, so plants never interfere with each other or with free fields.
struct Plant {
  PlantKind kind = PlantKind::Nind;
  bool array = false;        // NIND only: lhs/rhs become arrays
  std::string lhs_field;     // defaults to ind{t}_lhs / fd{t}_lhs
  std::string rhs_field;
  std::size_t groups = 0;    // NFD only: lhs groups; 0 = n_docs / 4, min 2
};

struct GenSpec {
  std::uint64_t seed = 1;
  std::size_t n_docs = 100;
  std::size_t n_scalar_keys = 2;
  std::size_t n_array_keys = 0;
  std::size_t array_len = 1;
  std::size_t nesting_depth = 0;
  std::size_t domain_size = 100;
  std::vector<Plant> planted;
  double violation_rate = 0.0;  // perturbs ceil(rate * n_docs) docs per plant
};

struct PlantedDependency {
  PlantKind kind;
  Path lhs;
  Path rhs;
};

namespace detail {

// Each plant draws from its own value slice, far above the free-value
// domain; aliens used for violations sit past the slice's legit range.
inline std::int64_t plant_base(std::size_t plant_index) {
  return static_cast<std::int64_t>(plant_index + 1) * 1'000'000'000'000LL;
}

inline std::string plant_lhs_name(const Plant& plant, std::size_t t) {
  if (!plant.lhs_field.empty()) return plant.lhs_field;
  return (plant.kind == PlantKind::Nind ? "ind" : "fd") + std::to_string(t) + "_lhs";
}

inline std::string plant_rhs_name(const Plant& plant, std::size_t t) {
  if (!plant.rhs_field.empty()) return plant.rhs_field;
  return (plant.kind == PlantKind::Nind ? "ind" : "fd") + std::to_string(t) + "_rhs";
}

inline std::size_t nfd_groups(const GenSpec& spec, const Plant& plant) {
  if (plant.groups >= 2) return plant.groups;
  return std::max<std::size_t>(2, spec.n_docs / 4);
}

inline void validate(const GenSpec& spec) {
  if (spec.n_docs < 1) throw GenerationError("n_docs must be at least 1");
  if (spec.array_len < 1) throw GenerationError("array_len must be at least 1");
  if (spec.domain_size < 1) throw GenerationError("domain_size must be at least 1");
  if (spec.violation_rate < 0.0 || spec.violation_rate >= 1.0)
    throw GenerationError("violation_rate must be in [0, 1)");

  std::set<std::string> fields;
  auto claim = [&](const std::string& name) {
    if (!fields.insert(name).second)
      throw GenerationError("conflicting plant fields: '" + name +
                            "' is claimed twice (cyclic or overlapping plants)");
  };
  for (std::size_t i = 0; i < spec.n_scalar_keys; ++i) claim("s" + std::to_string(i));
  for (std::size_t i = 0; i < spec.n_array_keys; ++i) claim("a" + std::to_string(i));
  for (std::size_t t = 0; t < spec.planted.size(); ++t) {
    claim(plant_lhs_name(spec.planted[t], t));
    claim(plant_rhs_name(spec.planted[t], t));
  }
}

}  // namespace detail

/// Number of documents perturbed per planted dependency.
inline std::size_t violated_doc_count(const GenSpec& spec) {
  return static_cast<std::size_t>(
      std::ceil(spec.violation_rate * static_cast<double>(spec.n_docs)));
}

/// Paths of the planted dependencies (after the nesting prefix).
inline std::vector<PlantedDependency> planted_dependencies(const GenSpec& spec) {
  detail::validate(spec);
  Path prefix;
  for (std::size_t d = 0; d < spec.nesting_depth; ++d)
    prefix = prefix.key("n" + std::to_string(d));
  std::vector<PlantedDependency> out;
  for (std::size_t t = 0; t < spec.planted.size(); ++t) {
    const Plant& plant = spec.planted[t];
    Path lhs = prefix.key(detail::plant_lhs_name(plant, t));
    Path rhs = prefix.key(detail::plant_rhs_name(plant, t));
    if (plant.kind == PlantKind::Nind && plant.array) {
      lhs = lhs.wildcard();
      rhs = rhs.wildcard();
    }
    out.push_back({plant.kind, std::move(lhs), std::move(rhs)});
  }
  return out;
}

/// Deterministic synthetic collection: per document, free scalar and
/// array fields drawn from [0, domain_size), plus one field pair per
/// plant constructed so the dependency holds exactly, then perturbed in
/// the first ceil(rate * n_docs) documents.
///
/// Planted NINDs assign document i the lhs value block i and the rhs
/// value block (i + 1) mod n, so collection-wide coverage is exact and
/// every document contributes distinct lhs values; a perturbed document
/// swaps its whole lhs block for alien values. Planted NFDs key both
/// sides off the document's group (i mod groups); a perturbed document
/// gets a unique alien rhs, violating against its group mates. Both
/// constructions make the oracle strength track 1 - rate to within one
/// document.
inline DocumentCollection generate(const GenSpec& spec) {
  detail::validate(spec);
  const std::size_t n = spec.n_docs;
  const std::size_t violated = violated_doc_count(spec);
  std::mt19937_64 rng(spec.seed);
  auto draw_free = [&]() {
    return JsonValue::integer(static_cast<std::int64_t>(rng() % spec.domain_size));
  };

  DocumentCollection collection;
  for (std::size_t i = 0; i < n; ++i) {
    JsonValue::Object fields;
    for (std::size_t s = 0; s < spec.n_scalar_keys; ++s)
      fields.emplace_back("s" + std::to_string(s), draw_free());
    for (std::size_t a = 0; a < spec.n_array_keys; ++a) {
      JsonValue::Array elems;
      for (std::size_t e = 0; e < spec.array_len; ++e) elems.push_back(draw_free());
      fields.emplace_back("a" + std::to_string(a), JsonValue::array(std::move(elems)));
    }

    const bool perturbed = i < violated;
    for (std::size_t t = 0; t < spec.planted.size(); ++t) {
      const Plant& plant = spec.planted[t];
      const std::int64_t base = detail::plant_base(t);
      const std::string lhs_name = detail::plant_lhs_name(plant, t);
      const std::string rhs_name = detail::plant_rhs_name(plant, t);
      if (plant.kind == PlantKind::Nind) {
        const std::size_t block = plant.array ? spec.array_len : 1;
        const std::int64_t legit_span = static_cast<std::int64_t>(n * block);
        auto block_values = [&](std::int64_t start) {
          JsonValue::Array elems;
          for (std::size_t e = 0; e < block; ++e)
            elems.push_back(JsonValue::integer(start + static_cast<std::int64_t>(e)));
          return elems;
        };
        const std::int64_t lhs_start =
            perturbed ? base + legit_span + static_cast<std::int64_t>(i * block)
                      : base + static_cast<std::int64_t>(i * block);
        const std::int64_t rhs_start =
            base + static_cast<std::int64_t>(((i + 1) % n) * block);
        if (plant.array) {
          fields.emplace_back(lhs_name, JsonValue::array(block_values(lhs_start)));
          fields.emplace_back(rhs_name, JsonValue::array(block_values(rhs_start)));
        } else {
          fields.emplace_back(lhs_name, JsonValue::integer(lhs_start));
          fields.emplace_back(rhs_name, JsonValue::integer(rhs_start));
        }
      } else {
        const std::size_t groups = detail::nfd_groups(spec, plant);
        const std::int64_t group = static_cast<std::int64_t>(i % groups);
        fields.emplace_back(lhs_name, JsonValue::integer(base + group));
        const std::int64_t rhs_value =
            perturbed ? base + 500'000'000LL + static_cast<std::int64_t>(i)
                      : base + 250'000'000LL + group;
        fields.emplace_back(rhs_name, JsonValue::integer(rhs_value));
      }
    }

    JsonValue doc = JsonValue::object(std::move(fields));
    for (std::size_t d = spec.nesting_depth; d > 0; --d) {
      JsonValue::Object wrapper;
      wrapper.emplace_back("n" + std::to_string(d - 1), std::move(doc));
      doc = JsonValue::object(std::move(wrapper));
    }
    collection.append(std::move(doc));
  }
  return collection;
}

/// Reads a GenSpec from its JSON form; unknown keys are rejected.
inline GenSpec gen_spec_from_json(const JsonValue& json) {
  if (!json.is_object()) throw GenerationError("generator config must be an object");
  GenSpec spec;
  auto as_count = [](const JsonValue& v, const char* key) -> std::size_t {
    if (!v.is_atom() || v.as_atom().kind() != Atom::Kind::Integer ||
        v.as_atom().as_int() < 0)
      throw GenerationError(std::string("generator config: '") + key +
                            "' must be a non-negative integer");
    return static_cast<std::size_t>(v.as_atom().as_int());
  };
  for (const auto& [key, value] : json.as_object()) {
    if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(as_count(value, "seed"));
    } else if (key == "n_docs") {
      spec.n_docs = as_count(value, "n_docs");
    } else if (key == "n_scalar_keys") {
      spec.n_scalar_keys = as_count(value, "n_scalar_keys");
    } else if (key == "n_array_keys") {
      spec.n_array_keys = as_count(value, "n_array_keys");
    } else if (key == "array_len") {
      spec.array_len = as_count(value, "array_len");
    } else if (key == "nesting_depth") {
      spec.nesting_depth = as_count(value, "nesting_depth");
    } else if (key == "domain_size") {
      spec.domain_size = as_count(value, "domain_size");
    } else if (key == "violation_rate") {
      if (!value.is_atom() || !value.as_atom().is_number())
        throw GenerationError("generator config: 'violation_rate' must be a number");
      spec.violation_rate = value.as_atom().kind() == Atom::Kind::Integer
                                ? static_cast<double>(value.as_atom().as_int())
                                : value.as_atom().as_real();
    } else if (key == "planted") {
      if (!value.is_array())
        throw GenerationError("generator config: 'planted' must be an array");
      for (const JsonValue& entry : value.as_array()) {
        if (!entry.is_object())
          throw GenerationError("generator config: each plant must be an object");
        Plant plant;
        for (const auto& [pkey, pval] : entry.as_object()) {
          if (pkey == "kind") {
            if (!pval.is_atom() || pval.as_atom().kind() != Atom::Kind::String)
              throw GenerationError("plant 'kind' must be \"nind\" or \"nfd\"");
            const std::string& kind = pval.as_atom().as_string();
            if (kind == "nind")
              plant.kind = PlantKind::Nind;
            else if (kind == "nfd")
              plant.kind = PlantKind::Nfd;
            else
              throw GenerationError("plant 'kind' must be \"nind\" or \"nfd\"");
          } else if (pkey == "array") {
            if (!pval.is_atom() || pval.as_atom().kind() != Atom::Kind::Boolean)
              throw GenerationError("plant 'array' must be a boolean");
            plant.array = pval.as_atom().as_bool();
          } else if (pkey == "lhs_field") {
            if (!pval.is_atom() || pval.as_atom().kind() != Atom::Kind::String)
              throw GenerationError("plant 'lhs_field' must be a string");
            plant.lhs_field = pval.as_atom().as_string();
          } else if (pkey == "rhs_field") {
            if (!pval.is_atom() || pval.as_atom().kind() != Atom::Kind::String)
              throw GenerationError("plant 'rhs_field' must be a string");
            plant.rhs_field = pval.as_atom().as_string();
          } else if (pkey == "groups") {
            plant.groups = as_count(pval, "groups");
          } else {
            throw GenerationError("unknown plant key '" + pkey + "'");
          }
        }
        spec.planted.push_back(std::move(plant));
      }
    } else {
      throw GenerationError("unknown generator config key '" + key + "'");
    }
  }
  detail::validate(spec);
  return spec;
}

}  // namespace nestprof
