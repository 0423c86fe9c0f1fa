#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nestprof/approx.hpp"
#include "nestprof/memory_budget.hpp"
#include "nestprof/path.hpp"
#include "nestprof/rational.hpp"
#include "nestprof/unroll.hpp"

namespace nestprof {

/// A unary nested inclusion dependency lhs <= rhs with its strength: the
/// fraction of distinct lhs values that also occur at rhs.
struct Nind {
  Path lhs;
  Path rhs;
  Rational strength;
  bool satisfied = false;

  friend bool operator==(const Nind&, const Nind&) = default;
};

/// Canonical output order: by serialized (lhs, rhs).
inline void sort_ninds(std::vector<Nind>& deps) {
  std::sort(deps.begin(), deps.end(), [](const Nind& a, const Nind& b) {
    const std::string al = a.lhs.serialize();
    const std::string bl = b.lhs.serialize();
    if (al != bl) return al < bl;
    return a.rhs.serialize() < b.rhs.serialize();
  });
}

// ---------------------------------------------------------------------------
// SPIDER: per-path sorted sets of distinct values.
// ---------------------------------------------------------------------------

class SpiderSink {
 public:
  explicit SpiderSink(MemoryBudget* budget = nullptr) : budget_(budget) {}

  void update(DocId, const Path& path, const Atom& value) {
    auto it = values_.find(path);
    if (it == values_.end()) {
      charge_budget(budget_, 96);
      it = values_.emplace(path, std::unordered_set<Atom, AtomHash>{}).first;
    }
    if (it->second.insert(value).second) charge_budget(budget_, 48);
  }

  void merge(SpiderSink& other) {
    for (auto& [path, vals] : other.values_) {
      auto& mine = values_[path];
      mine.insert(vals.begin(), vals.end());
    }
  }

  /// Sorted distinct value lists per path, ready for merge scans.
  std::map<Path, std::vector<Atom>> freeze() const {
    std::map<Path, std::vector<Atom>> meta;
    for (const auto& [path, vals] : values_) {
      std::vector<Atom> sorted(vals.begin(), vals.end());
      std::sort(sorted.begin(), sorted.end());
      meta.emplace(path, std::move(sorted));
    }
    return meta;
  }

 private:
  std::unordered_map<Path, std::unordered_set<Atom, AtomHash>, PathHash> values_;
  MemoryBudget* budget_;
};

using SpiderMeta = std::map<Path, std::vector<Atom>>;

/// |lhs values also at rhs| / |lhs values|, by merge scan of sorted lists.
inline Rational inclusion_strength(const std::vector<Atom>& lhs,
                                   const std::vector<Atom>& rhs) {
  std::int64_t included = 0;
  std::size_t i = 0, j = 0;
  while (i < lhs.size() && j < rhs.size()) {
    if (lhs[i] < rhs[j]) {
      ++i;
    } else if (rhs[j] < lhs[i]) {
      ++j;
    } else {
      ++included;
      ++i;
      ++j;
    }
  }
  return Rational(included, static_cast<std::int64_t>(lhs.size()));
}

/// Scores every ordered path pair. Reflexive pairs are suppressed (their
/// strength is 1 by construction); paths with no values never appear as a
/// left-hand side because they never enter the metadata.
inline std::vector<Nind> spider_mine(const SpiderMeta& meta, const Threshold& threshold) {
  if (meta.empty()) throw MiningError("no paths to mine");
  std::vector<Nind> out;
  for (const auto& [lhs, lhs_values] : meta) {
    if (lhs_values.empty()) continue;
    for (const auto& [rhs, rhs_values] : meta) {
      if (lhs == rhs) continue;
      const Rational strength = inclusion_strength(lhs_values, rhs_values);
      out.push_back(Nind{lhs, rhs, strength, threshold.satisfied(strength)});
    }
  }
  sort_ninds(out);
  return out;
}

// ---------------------------------------------------------------------------
// DeMarchi: per-value sets of paths, inverted relative to SPIDER.
// ---------------------------------------------------------------------------

class DeMarchiSink {
 public:
  explicit DeMarchiSink(MemoryBudget* budget = nullptr) : budget_(budget) {}

  void update(DocId, const Path& path, const Atom& value) {
    auto it = paths_by_value_.find(value);
    if (it == paths_by_value_.end()) {
      charge_budget(budget_, 96);
      it = paths_by_value_.emplace(value, std::set<Path>{}).first;
    }
    if (it->second.insert(path).second) charge_budget(budget_, 64);
  }

  void merge(DeMarchiSink& other) {
    for (auto& [value, paths] : other.paths_by_value_) {
      auto& mine = paths_by_value_[value];
      mine.insert(paths.begin(), paths.end());
    }
  }

  const std::unordered_map<Atom, std::set<Path>, AtomHash>& meta() const {
    return paths_by_value_;
  }

  std::unordered_map<Atom, std::set<Path>, AtomHash> take_meta() {
    return std::move(paths_by_value_);
  }

 private:
  std::unordered_map<Atom, std::set<Path>, AtomHash> paths_by_value_;
  MemoryBudget* budget_;
};

using DeMarchiMeta = std::unordered_map<Atom, std::set<Path>, AtomHash>;

/// Each value contributes one total count per path it occurs at and one
/// co-occurrence count toward every other path holding it. Produces the
/// same (lhs, rhs, strength) triples as spider_mine.
inline std::vector<Nind> demarchi_mine(const DeMarchiMeta& meta, const Threshold& threshold) {
  if (meta.empty()) throw MiningError("no paths to mine");
  std::set<Path> universe;
  for (const auto& [value, paths] : meta)
    universe.insert(paths.begin(), paths.end());

  std::map<Path, std::int64_t> totals;
  std::map<std::pair<Path, Path>, std::int64_t> co_occurrence;
  for (const auto& [value, paths] : meta) {
    for (const Path& p : paths) {
      totals[p] += 1;
      for (const Path& q : paths)
        if (!(p == q)) co_occurrence[{p, q}] += 1;
    }
  }

  std::vector<Nind> out;
  for (const Path& lhs : universe) {
    const std::int64_t total = totals[lhs];
    if (total == 0) continue;
    for (const Path& rhs : universe) {
      if (lhs == rhs) continue;
      const auto it = co_occurrence.find({lhs, rhs});
      const std::int64_t included = it == co_occurrence.end() ? 0 : it->second;
      const Rational strength(included, total);
      out.push_back(Nind{lhs, rhs, strength, threshold.satisfied(strength)});
    }
  }
  sort_ninds(out);
  return out;
}

// ---------------------------------------------------------------------------
// Collection drivers (either unroll strategy, optional worker sharding).
// ---------------------------------------------------------------------------

inline SpiderMeta spider_collect(const DocumentCollection& collection, int threads = 1,
                                 MemoryBudget* budget = nullptr) {
  return collect_dynamic<SpiderSink>(collection, threads, budget).freeze();
}

inline SpiderMeta spider_collect(const FlatTable& table, MemoryBudget* budget = nullptr) {
  SpiderSink sink(budget);
  table.feed(sink);
  return sink.freeze();
}

inline DeMarchiMeta demarchi_collect(const DocumentCollection& collection, int threads = 1,
                                     MemoryBudget* budget = nullptr) {
  return collect_dynamic<DeMarchiSink>(collection, threads, budget).take_meta();
}

inline DeMarchiMeta demarchi_collect(const FlatTable& table, MemoryBudget* budget = nullptr) {
  DeMarchiSink sink(budget);
  table.feed(sink);
  return sink.take_meta();
}

}  // namespace nestprof
