#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "nestprof/approx.hpp"
#include "nestprof/path_eval.hpp"
#include "nestprof/rational.hpp"

namespace nestprof {
namespace oracle {

/// True iff every atomic value the document holds at p1 occurs somewhere
/// in the collection at p2. Vacuously true for an empty left side.
inline bool fully_included(const DocumentCollection& collection, const Document& doc,
                           const Path& p1, const Path& p2) {
  const ValueSet lhs = evaluate_path(doc, p1);
  if (lhs.empty()) return true;
  ValueSet rhs;
  for (const Document& d : collection) {
    const ValueSet vs = evaluate_path(d, p2);
    rhs.insert(vs.begin(), vs.end());
  }
  return std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end());
}

struct NindCheck {
  bool valid;
  Rational exact_strength;
};

/// Validates p1 <= p2 against the definition, one document at a time, and
/// reports the fraction of distinct p1 values that occur at p2.
inline NindCheck validate_nind(const DocumentCollection& collection, const Path& p1,
                               const Path& p2) {
  ValueSet lhs_union;
  ValueSet rhs_union;
  bool valid = true;
  for (const Document& d : collection) {
    const ValueSet l = evaluate_path(d, p1);
    lhs_union.insert(l.begin(), l.end());
    const ValueSet r = evaluate_path(d, p2);
    rhs_union.insert(r.begin(), r.end());
  }
  for (const Document& d : collection) {
    const ValueSet l = evaluate_path(d, p1);
    if (!std::includes(rhs_union.begin(), rhs_union.end(), l.begin(), l.end())) {
      valid = false;
      break;
    }
  }
  if (lhs_union.empty()) return {true, Rational::one()};
  std::int64_t included = 0;
  for (const Atom& v : lhs_union)
    if (rhs_union.count(v)) ++included;
  return {valid, Rational(included, static_cast<std::int64_t>(lhs_union.size()))};
}

/// Validates lhs -> rhs over every unordered pair of distinct documents:
/// either some lhs path has disjoint value sets, or every rhs path has
/// intersecting value sets.
inline bool validate_nfd(const DocumentCollection& collection,
                         const std::vector<Path>& lhs, const std::vector<Path>& rhs) {
  const auto& docs = collection.documents();
  for (std::size_t a = 0; a < docs.size(); ++a) {
    for (std::size_t b = a + 1; b < docs.size(); ++b) {
      bool lhs_disjoint = false;
      for (const Path& p : lhs) {
        if (!value_sets_intersect(evaluate_path(docs[a], p), evaluate_path(docs[b], p))) {
          lhs_disjoint = true;
          break;
        }
      }
      if (lhs_disjoint) continue;
      for (const Path& p : rhs) {
        if (!value_sets_intersect(evaluate_path(docs[a], p), evaluate_path(docs[b], p)))
          return false;
      }
    }
  }
  return true;
}

/// The violating document pairs of lhs -> rhs, straight from the
/// definition. Shared by strength checks and miner equivalence tests.
inline ViolationGraph nfd_violations(const DocumentCollection& collection,
                                     const std::vector<Path>& lhs, const Path& rhs) {
  ViolationGraph graph;
  const auto& docs = collection.documents();
  for (std::size_t a = 0; a < docs.size(); ++a) {
    for (std::size_t b = a + 1; b < docs.size(); ++b) {
      bool agree = true;
      for (const Path& p : lhs) {
        if (!value_sets_intersect(evaluate_path(docs[a], p), evaluate_path(docs[b], p))) {
          agree = false;
          break;
        }
      }
      if (!agree) continue;
      if (!value_sets_intersect(evaluate_path(docs[a], rhs), evaluate_path(docs[b], rhs)))
        graph.add_edge(docs[a].id, docs[b].id);
    }
  }
  return graph;
}

namespace detail {

// `edges` holds only the still-uncovered edges; branching picks either
// endpoint of the first one.
inline void min_cover_search(std::vector<std::pair<DocId, DocId>> edges,
                             std::size_t chosen, std::size_t& best) {
  if (chosen >= best) return;
  if (edges.empty()) {
    best = chosen;
    return;
  }
  const auto [u, v] = edges.front();
  for (DocId pick : {u, v}) {
    std::vector<std::pair<DocId, DocId>> rest;
    rest.reserve(edges.size());
    for (const auto& e : edges)
      if (e.first != pick && e.second != pick) rest.push_back(e);
    min_cover_search(std::move(rest), chosen + 1, best);
  }
}

}  // namespace detail

/// Exact minimum vertex cover by branch and bound. Intended for small
/// violation graphs (<= 20 involved documents); throws beyond that.
inline std::size_t exact_min_vertex_cover(const ViolationGraph& graph) {
  const auto& edges = graph.edges();
  std::set<DocId> vertices;
  for (const auto& [a, b] : edges) {
    vertices.insert(a);
    vertices.insert(b);
  }
  if (vertices.size() > 20)
    throw std::invalid_argument("exact_min_vertex_cover: graph too large (" +
                                std::to_string(vertices.size()) + " vertices)");
  std::size_t best = vertices.size();
  detail::min_cover_search(edges, 0, best);
  return best;
}

}  // namespace oracle
}  // namespace nestprof
