#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nestprof/approx.hpp"
#include "nestprof/memory_budget.hpp"
#include "nestprof/pair_bitmap.hpp"
#include "nestprof/parallel.hpp"
#include "nestprof/path.hpp"
#include "nestprof/rational.hpp"
#include "nestprof/unroll.hpp"

namespace nestprof {

/// A nested functional dependency lhs -> rhs. Strength is 1 minus the
/// estimated fraction of violating documents; miners emit only minimal
/// satisfied dependencies.
struct Nfd {
  std::vector<Path> lhs;  // sorted by serialized form
  Path rhs;
  Rational strength;
  bool satisfied = true;

  friend bool operator==(const Nfd&, const Nfd&) = default;
};

inline void sort_nfds(std::vector<Nfd>& deps) {
  auto key = [](const Nfd& d) {
    std::vector<std::string> lhs;
    lhs.reserve(d.lhs.size());
    for (const Path& p : d.lhs) lhs.push_back(p.serialize());
    return std::make_pair(std::move(lhs), d.rhs.serialize());
  };
  std::sort(deps.begin(), deps.end(),
            [&](const Nfd& a, const Nfd& b) { return key(a) < key(b); });
}

// ---------------------------------------------------------------------------
// TANE metadata: global value indexes plus per-(path, value) partitions.
// ---------------------------------------------------------------------------

class TaneSink {
 public:
  explicit TaneSink(MemoryBudget* budget = nullptr) : budget_(budget) {}

  void update(DocId id, const Path& path, const Atom& value) {
    auto [vit, fresh] = value_indexes_.try_emplace(
        value, static_cast<std::uint32_t>(value_indexes_.size()));
    if (fresh) charge_budget(budget_, 48);
    auto& partitions = load_partitions_[path];
    if (partitions[vit->second].insert(id).second) charge_budget(budget_, 24);
  }

  void merge(TaneSink& other) {
    std::vector<std::uint32_t> remap(other.value_indexes_.size());
    for (const auto& [value, idx] : other.value_indexes_) {
      auto [vit, fresh] = value_indexes_.try_emplace(
          value, static_cast<std::uint32_t>(value_indexes_.size()));
      (void)fresh;
      remap[idx] = vit->second;
    }
    for (auto& [path, partitions] : other.load_partitions_) {
      auto& mine = load_partitions_[path];
      for (auto& [idx, docs] : partitions)
        mine[remap[idx]].insert(docs.begin(), docs.end());
    }
  }

  const std::unordered_map<Atom, std::uint32_t, AtomHash>& value_indexes() const {
    return value_indexes_;
  }

  using Partitions = std::map<std::uint32_t, std::set<DocId>>;

  const std::map<Path, Partitions>& load_partitions() const { return load_partitions_; }

 private:
  std::unordered_map<Atom, std::uint32_t, AtomHash> value_indexes_;
  std::map<Path, Partitions> load_partitions_;
  MemoryBudget* budget_;
};

/// Per-path adjacency: bit (i, j) is set when documents i and j hold at
/// least one common value at the path, computed as the union of all
/// within-partition pairs.
inline std::map<Path, PairBitmap> build_adjacency(const TaneSink& meta, std::size_t n_docs,
                                                  int threads = 1,
                                                  MemoryBudget* budget = nullptr) {
  std::vector<const std::pair<const Path, TaneSink::Partitions>*> entries;
  entries.reserve(meta.load_partitions().size());
  for (const auto& entry : meta.load_partitions()) entries.push_back(&entry);

  std::vector<PairBitmap> bitmaps(entries.size());
  parallel_for_ranges(entries.size(), threads, [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      std::vector<std::uint64_t> pairs;
      for (const auto& [value_index, docs] : entries[e]->second) {
        if (docs.size() < 2 || n_docs < 2) continue;
        charge_budget(budget, docs.size() * (docs.size() - 1) / 2 * 8);
        std::vector<DocId> ids(docs.begin(), docs.end());
        for (std::size_t a = 0; a < ids.size(); ++a)
          for (std::size_t b = a + 1; b < ids.size(); ++b)
            pairs.push_back(pair_index(ids[a], ids[b]));
      }
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
      bitmaps[e] = PairBitmap::from_sorted(pairs);
      charge_budget(budget, bitmaps[e].approx_bytes());
    }
  });

  std::map<Path, PairBitmap> adjacency;
  for (std::size_t e = 0; e < entries.size(); ++e)
    adjacency.emplace(entries[e]->first, std::move(bitmaps[e]));
  return adjacency;
}

namespace detail {

inline ViolationGraph graph_from_pair_bitmap(const PairBitmap& pairs) {
  ViolationGraph graph;
  pairs.for_each([&](std::uint64_t idx) {
    const auto [i, j] = pair_from_index(idx);
    graph.add_edge(i, j);
  });
  return graph;
}

/// Sorted-vector subset test for lhs index sets.
inline bool index_subset(const std::vector<std::uint32_t>& a,
                         const std::vector<std::uint32_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool has_satisfied_subset(const std::vector<std::vector<std::uint32_t>>& satisfied,
                                 const std::vector<std::uint32_t>& candidate) {
  for (const auto& s : satisfied)
    if (index_subset(s, candidate)) return true;
  return false;
}

}  // namespace detail

/// Levelwise lattice search over lhs sets. The lhs bitmap is the
/// intersection of its members' adjacency bitmaps; a dependency is exact
/// when that bitmap is a subset of the rhs bitmap, and its strength
/// otherwise comes from the greedy document cover of the violating pairs.
/// A dependency satisfied at the threshold prunes all its supersets, so
/// the output is exactly the minimal satisfied dependencies.
inline std::vector<Nfd> tane_mine(const std::map<Path, PairBitmap>& adjacency,
                                  std::size_t n_docs, const Threshold& threshold,
                                  std::size_t max_lhs) {
  if (n_docs < 2) throw MiningError("insufficient documents (need at least 2)");
  if (adjacency.empty()) throw MiningError("no paths to mine");
  if (max_lhs < 1) throw MiningError("max_lhs must be at least 1");

  std::vector<const Path*> paths;
  std::vector<const PairBitmap*> adj;
  for (const auto& [path, bitmap] : adjacency) {
    paths.push_back(&path);
    adj.push_back(&bitmap);
  }
  const std::size_t n_paths = paths.size();

  struct Node {
    std::vector<std::uint32_t> lhs;
    PairBitmap agree;
  };
  std::vector<Node> level;
  for (std::uint32_t i = 0; i < n_paths; ++i) level.push_back({{i}, *adj[i]});

  std::vector<std::vector<std::vector<std::uint32_t>>> satisfied(n_paths);
  std::vector<Nfd> out;

  auto make_nfd = [&](const std::vector<std::uint32_t>& lhs, std::uint32_t rhs,
                      Rational strength) {
    Nfd dep;
    for (std::uint32_t p : lhs) dep.lhs.push_back(*paths[p]);
    std::sort(dep.lhs.begin(), dep.lhs.end(), [](const Path& a, const Path& b) {
      return a.serialize() < b.serialize();
    });
    dep.rhs = *paths[rhs];
    dep.strength = strength;
    dep.satisfied = true;
    return dep;
  };

  for (std::size_t depth = 1; depth <= max_lhs; ++depth) {
    for (const Node& node : level) {
      for (std::uint32_t rhs = 0; rhs < n_paths; ++rhs) {
        if (std::binary_search(node.lhs.begin(), node.lhs.end(), rhs)) continue;
        if (detail::has_satisfied_subset(satisfied[rhs], node.lhs)) continue;
        const PairBitmap violating = node.agree.difference(*adj[rhs]);
        Rational strength = Rational::one();
        if (!violating.empty()) {
          const std::size_t cover =
              greedy_vertex_cover(detail::graph_from_pair_bitmap(violating));
          strength = strength_from_cover(cover, n_docs);
        }
        if (threshold.satisfied(strength)) {
          out.push_back(make_nfd(node.lhs, rhs, strength));
          satisfied[rhs].push_back(node.lhs);
        }
      }
    }
    if (depth == max_lhs) break;
    std::vector<Node> next;
    for (const Node& node : level) {
      if (node.agree.empty()) continue;  // supersets cannot be minimal
      for (std::uint32_t q = node.lhs.back() + 1; q < n_paths; ++q) {
        std::vector<std::uint32_t> lhs = node.lhs;
        lhs.push_back(q);
        next.push_back({std::move(lhs), node.agree.intersect(*adj[q])});
      }
    }
    level = std::move(next);
  }

  sort_nfds(out);
  return out;
}

// ---------------------------------------------------------------------------
// FDep metadata: per-document flattened path -> value-set maps.
// ---------------------------------------------------------------------------

class FdepSink {
 public:
  explicit FdepSink(MemoryBudget* budget = nullptr) : budget_(budget) {}

  void update(DocId id, const Path& path, const Atom& value) {
    paths_.insert(path);
    auto dit = docs_.find(id);
    if (dit == docs_.end()) {
      charge_budget(budget_, 96);
      dit = docs_.emplace(id, PathValues{}).first;
    }
    if (dit->second[path].insert(value).second) charge_budget(budget_, 48);
  }

  void merge(FdepSink& other) {
    paths_.insert(other.paths_.begin(), other.paths_.end());
    for (auto& [id, by_path] : other.docs_) {
      auto& mine = docs_[id];
      for (auto& [path, values] : by_path)
        mine[path].insert(values.begin(), values.end());
    }
  }

  using PathValues =
      std::unordered_map<Path, std::unordered_set<Atom, AtomHash>, PathHash>;

  const std::set<Path>& paths() const { return paths_; }
  const std::unordered_map<DocId, PathValues>& docs() const { return docs_; }

 private:
  std::set<Path> paths_;
  std::unordered_map<DocId, PathValues> docs_;
  MemoryBudget* budget_;
};

namespace detail {

/// Fixed-width bitset over path indices; agree sets of document pairs.
class PathMask {
 public:
  PathMask() = default;
  explicit PathMask(std::size_t n_bits) : words_((n_bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= 1ull << (i & 63); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  bool contains_all(const std::vector<std::uint32_t>& indices) const {
    for (std::uint32_t i : indices)
      if (!test(i)) return false;
    return true;
  }

  bool is_subset_of(const PathMask& other) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~other.words_[w]) return false;
    return true;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }

  friend bool operator==(const PathMask& a, const PathMask& b) {
    return a.words_ == b.words_;
  }
  friend bool operator<(const PathMask& a, const PathMask& b) {
    return a.words_ < b.words_;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct AgreePair {
  std::uint64_t pair_id;
  PathMask agree;
};

/// Agree sets for every document pair that agrees somewhere and disagrees
/// somewhere; pairs agreeing nowhere can violate nothing (a non-empty lhs
/// never fits), and pairs agreeing everywhere violate nothing either.
inline std::vector<AgreePair> collect_agree_pairs(
    const FdepSink& meta, const std::vector<const Path*>& paths, std::size_t n_docs,
    int threads, MemoryBudget* budget) {
  const std::size_t n_paths = paths.size();

  // Per document, value sets aligned with the path list (null = absent).
  std::vector<std::vector<const std::unordered_set<Atom, AtomHash>*>> doc_values(
      n_docs + 1, std::vector<const std::unordered_set<Atom, AtomHash>*>(n_paths, nullptr));
  for (const auto& [id, by_path] : meta.docs()) {
    if (id == 0 || id > n_docs)
      throw std::invalid_argument("fdep metadata holds a document id outside 1..n_docs");
    for (std::size_t p = 0; p < n_paths; ++p) {
      auto it = by_path.find(*paths[p]);
      if (it != by_path.end()) doc_values[id][p] = &it->second;
    }
  }

  auto sets_intersect = [](const std::unordered_set<Atom, AtomHash>* a,
                           const std::unordered_set<Atom, AtomHash>* b) {
    if (!a || !b) return false;
    if (a->size() > b->size()) std::swap(a, b);
    for (const Atom& v : *a)
      if (b->count(v)) return true;
    return false;
  };

  const std::uint64_t total_pairs =
      static_cast<std::uint64_t>(n_docs) * (n_docs - 1) / 2;
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(total_pairs)));
  std::vector<std::vector<AgreePair>> shards(static_cast<std::size_t>(workers));

  parallel_for_ranges(total_pairs, workers, [&](int w, std::size_t begin, std::size_t end) {
    std::vector<AgreePair>& local = shards[static_cast<std::size_t>(w)];
    for (std::uint64_t pid = begin; pid < end; ++pid) {
      const auto [i, j] = pair_from_index(pid);
      PathMask agree(n_paths);
      bool any_agree = false;
      bool any_disagree = false;
      for (std::size_t p = 0; p < n_paths; ++p) {
        if (sets_intersect(doc_values[i][p], doc_values[j][p])) {
          agree.set(p);
          any_agree = true;
        } else {
          any_disagree = true;
        }
      }
      if (any_agree && any_disagree) {
        charge_budget(budget, 24 + n_paths / 8);
        local.push_back(AgreePair{pid, std::move(agree)});
      }
    }
  });

  std::vector<AgreePair> pairs;
  for (auto& shard : shards)
    pairs.insert(pairs.end(), std::make_move_iterator(shard.begin()),
                 std::make_move_iterator(shard.end()));
  return pairs;  // ascending pair_id: shards cover ascending ranges
}

/// Keeps only lhs sets that are minimal (no subset already present),
/// evicting any supersets of the newcomer.
inline void insert_minimal(std::set<std::vector<std::uint32_t>>& sets,
                           const std::vector<std::uint32_t>& candidate) {
  for (const auto& s : sets)
    if (index_subset(s, candidate)) return;
  for (auto it = sets.begin(); it != sets.end();)
    it = index_subset(candidate, *it) ? sets.erase(it) : ++it;
  sets.insert(candidate);
}

}  // namespace detail

/// FDep mining. Exact mode builds the negative cover from pairwise agree
/// sets, maximizes it, and complements it into the minimal positive cover.
/// Approximate mode walks the lattice, scoring each violated candidate by
/// its greedily covered violating documents and admitting those at or
/// above the threshold. Either way the result matches tane_mine.
inline std::vector<Nfd> fdep_mine(const FdepSink& meta, std::size_t n_docs,
                                  const Threshold& threshold, std::size_t max_lhs,
                                  int threads = 1, MemoryBudget* budget = nullptr) {
  if (n_docs < 2) throw MiningError("insufficient documents (need at least 2)");
  if (meta.paths().empty()) throw MiningError("no paths to mine");
  if (max_lhs < 1) throw MiningError("max_lhs must be at least 1");

  std::vector<const Path*> paths;
  for (const Path& p : meta.paths()) paths.push_back(&p);
  const std::size_t n_paths = paths.size();

  std::vector<detail::AgreePair> pairs =
      detail::collect_agree_pairs(meta, paths, n_docs, threads, budget);

  auto make_nfd = [&](const std::vector<std::uint32_t>& lhs, std::uint32_t rhs,
                      Rational strength) {
    Nfd dep;
    for (std::uint32_t p : lhs) dep.lhs.push_back(*paths[p]);
    std::sort(dep.lhs.begin(), dep.lhs.end(), [](const Path& a, const Path& b) {
      return a.serialize() < b.serialize();
    });
    dep.rhs = *paths[rhs];
    dep.strength = strength;
    dep.satisfied = true;
    return dep;
  };

  std::vector<Nfd> out;

  if (threshold.value == Rational::one()) {
    // Negative cover -> positive cover, one right-hand side at a time.
    for (std::uint32_t rhs = 0; rhs < n_paths; ++rhs) {
      // Maximal distinct agree sets among pairs that disagree on rhs.
      std::set<detail::PathMask> distinct;
      for (const detail::AgreePair& pair : pairs)
        if (!pair.agree.test(rhs)) distinct.insert(pair.agree);
      std::vector<const detail::PathMask*> maximal;
      for (const detail::PathMask& m : distinct) {
        bool dominated = false;
        for (const detail::PathMask& other : distinct) {
          if (!(m == other) && m.is_subset_of(other)) {
            dominated = true;
            break;
          }
        }
        if (!dominated) maximal.push_back(&m);
      }

      // Specialize: replace every lhs contained in a violated agree set
      // by its extensions outside that set, keeping the cover minimal.
      std::set<std::vector<std::uint32_t>> positive;
      positive.insert(std::vector<std::uint32_t>{});
      for (const detail::PathMask* m : maximal) {
        std::set<std::vector<std::uint32_t>> next;
        for (const auto& lhs : positive) {
          if (!m->contains_all(lhs)) {
            detail::insert_minimal(next, lhs);
            continue;
          }
          for (std::uint32_t a = 0; a < n_paths; ++a) {
            if (a == rhs || m->test(a)) continue;
            if (std::binary_search(lhs.begin(), lhs.end(), a)) continue;
            if (lhs.size() + 1 > max_lhs) continue;
            std::vector<std::uint32_t> extended = lhs;
            extended.insert(std::lower_bound(extended.begin(), extended.end(), a), a);
            detail::insert_minimal(next, extended);
          }
        }
        positive = std::move(next);
      }

      for (const auto& lhs : positive) {
        if (lhs.empty()) {
          // rhs agrees on every agreeing pair: every singleton is minimal.
          for (std::uint32_t p = 0; p < n_paths; ++p)
            if (p != rhs) out.push_back(make_nfd({p}, rhs, Rational::one()));
        } else {
          out.push_back(make_nfd(lhs, rhs, Rational::one()));
        }
      }
    }
    sort_nfds(out);
    return out;
  }

  // Approximate mode: levelwise admission with per-candidate violation
  // counts taken straight from the agree-set list.
  std::vector<std::vector<std::vector<std::uint32_t>>> satisfied(n_paths);
  std::vector<std::vector<std::uint32_t>> level;
  for (std::uint32_t i = 0; i < n_paths; ++i) level.push_back({i});

  for (std::size_t depth = 1; depth <= max_lhs; ++depth) {
    std::vector<char> extend(level.size(), 0);
    for (std::size_t n = 0; n < level.size(); ++n) {
      const auto& lhs = level[n];
      bool lhs_agrees_somewhere = false;
      for (std::uint32_t rhs = 0; rhs < n_paths; ++rhs) {
        if (std::binary_search(lhs.begin(), lhs.end(), rhs)) continue;
        if (detail::has_satisfied_subset(satisfied[rhs], lhs)) continue;
        ViolationGraph graph;
        for (const detail::AgreePair& pair : pairs) {
          if (!pair.agree.contains_all(lhs)) continue;
          lhs_agrees_somewhere = true;
          if (!pair.agree.test(rhs)) {
            const auto [i, j] = pair_from_index(pair.pair_id);
            graph.add_edge(i, j);
          }
        }
        const Rational strength =
            graph.empty() ? Rational::one()
                          : strength_from_cover(greedy_vertex_cover(graph), n_docs);
        if (threshold.satisfied(strength)) {
          out.push_back(make_nfd(lhs, rhs, strength));
          satisfied[rhs].push_back(lhs);
        }
      }
      extend[n] = lhs_agrees_somewhere ? 1 : 0;
    }
    if (depth == max_lhs) break;
    std::vector<std::vector<std::uint32_t>> next;
    for (std::size_t n = 0; n < level.size(); ++n) {
      if (!extend[n]) continue;  // no agreeing pair: supersets are non-minimal
      for (std::uint32_t q = level[n].back() + 1; q < n_paths; ++q) {
        std::vector<std::uint32_t> lhs = level[n];
        lhs.push_back(q);
        next.push_back(std::move(lhs));
      }
    }
    level = std::move(next);
  }

  sort_nfds(out);
  return out;
}

// ---------------------------------------------------------------------------
// Collection drivers.
// ---------------------------------------------------------------------------

inline TaneSink tane_collect(const DocumentCollection& collection, int threads = 1,
                             MemoryBudget* budget = nullptr) {
  return collect_dynamic<TaneSink>(collection, threads, budget);
}

inline TaneSink tane_collect(const FlatTable& table, MemoryBudget* budget = nullptr) {
  TaneSink sink(budget);
  table.feed(sink);
  return sink;
}

inline FdepSink fdep_collect(const DocumentCollection& collection, int threads = 1,
                             MemoryBudget* budget = nullptr) {
  return collect_dynamic<FdepSink>(collection, threads, budget);
}

inline FdepSink fdep_collect(const FlatTable& table, MemoryBudget* budget = nullptr) {
  FdepSink sink(budget);
  table.feed(sink);
  return sink;
}

}  // namespace nestprof
