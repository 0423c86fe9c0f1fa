#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nestprof/json_value.hpp"
#include "nestprof/rational.hpp"

namespace nestprof {

/// Documents connected whenever the pair violates a candidate dependency.
/// Edges are unordered, self-loop free, and deduplicated; the canonical
/// edge order used by the greedy cover is descending (max id, min id).
class ViolationGraph {
 public:
  ViolationGraph() = default;

  explicit ViolationGraph(std::vector<std::pair<DocId, DocId>> edges) {
    for (auto& [a, b] : edges) {
      if (a == b) continue;
      edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    canonicalize();
  }

  void add_edge(DocId a, DocId b) {
    if (a == b) return;
    edges_.emplace_back(std::min(a, b), std::max(a, b));
    canonical_ = false;
  }

  /// Edges sorted ascending by (max id, min id); iterate in reverse for
  /// the canonical greedy order.
  const std::vector<std::pair<DocId, DocId>>& edges() const {
    const_cast<ViolationGraph*>(this)->canonicalize();
    return edges_;
  }

  std::size_t edge_count() const { return edges().size(); }
  bool empty() const { return edges().empty(); }

 private:
  void canonicalize() {
    if (canonical_) return;
    std::sort(edges_.begin(), edges_.end(),
              [](const auto& x, const auto& y) {
                if (x.second != y.second) return x.second < y.second;
                return x.first < y.first;
              });
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    canonical_ = true;
  }

  std::vector<std::pair<DocId, DocId>> edges_;
  bool canonical_ = true;
};

/// Greedy 2-approximation of the minimum vertex cover, counting violating
/// documents: walk edges in canonical order and, whenever neither endpoint
/// is marked yet, mark both and count two. The result is the size of a
/// maximal matching doubled, so exact <= greedy <= 2 * exact.
inline std::size_t greedy_vertex_cover(const ViolationGraph& graph) {
  const auto& edges = graph.edges();
  std::unordered_set<DocId> marked;
  std::size_t count = 0;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    const auto& [a, b] = *it;
    if (marked.count(a) || marked.count(b)) continue;
    marked.insert(a);
    marked.insert(b);
    count += 2;
  }
  return count;
}

/// 1 - violating_documents / total_documents.
inline Rational strength_from_cover(std::size_t cover_size, std::size_t n_docs) {
  if (n_docs == 0) throw std::invalid_argument("strength_from_cover: no documents");
  if (cover_size > n_docs)
    throw std::invalid_argument("strength_from_cover: cover larger than collection");
  return Rational(static_cast<std::int64_t>(n_docs - cover_size),
                  static_cast<std::int64_t>(n_docs));
}

/// Acceptance threshold on dependency strength.
struct Threshold {
  Rational value{99, 100};

  bool satisfied(const Rational& strength) const { return strength >= value; }

  static Threshold checked(Rational value) {
    if (value <= Rational::zero() || value > Rational::one())
      throw std::invalid_argument("threshold must be in (0, 1]");
    return Threshold{value};
  }
};

}  // namespace nestprof
