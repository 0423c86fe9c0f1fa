#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nestprof/json_value.hpp"
#include "nestprof/memory_budget.hpp"
#include "nestprof/parallel.hpp"
#include "nestprof/path.hpp"

namespace nestprof {

/// Anything that can absorb (document id, path, atomic value) triples.
/// update is called once per leaf occurrence; the same value appearing
/// twice at a path within one document produces two calls.
template <typename S>
concept MetadataSink = requires(S s, DocId id, const Path& p, const Atom& a) {
  s.update(id, p, a);
};

// ---------------------------------------------------------------------------
// Dynamic unrolling: stream leaf triples straight into a sink.
// ---------------------------------------------------------------------------

namespace detail {

template <typename Sink>
std::uint64_t dynamic_walk(DocId id, const JsonValue& node, Path& scratch, Sink& sink) {
  std::uint64_t updates = 0;
  if (node.is_object()) {
    for (const auto& [key, child] : node.as_object()) {
      scratch.push(Step::key(key));
      updates += dynamic_walk(id, child, scratch, sink);
      scratch.pop();
    }
  } else if (node.is_array()) {
    scratch.push(Step::wildcard());
    for (const JsonValue& elem : node.as_array())
      updates += dynamic_walk(id, elem, scratch, sink);
    scratch.pop();
  } else if (node.is_atom()) {
    sink.update(id, scratch, node.as_atom());
    ++updates;
  }
  // null and empty containers contribute nothing
  return updates;
}

}  // namespace detail

/// Depth-first traversal of documents [begin, end), appending `.key` for
/// object entries and `[*]` for array elements, calling sink.update for
/// every non-null atomic leaf. Returns the number of update calls.
template <typename Sink>
  requires MetadataSink<Sink>
std::uint64_t dynamic_unroll_range(const DocumentCollection& collection,
                                   std::size_t begin, std::size_t end, Sink& sink) {
  std::uint64_t updates = 0;
  Path scratch;
  for (std::size_t i = begin; i < end; ++i)
    updates += detail::dynamic_walk(collection[i].id, collection[i].root, scratch, sink);
  return updates;
}

template <typename Sink>
  requires MetadataSink<Sink>
std::uint64_t dynamic_unroll(const DocumentCollection& collection, Sink& sink) {
  return dynamic_unroll_range(collection, 0, collection.size(), sink);
}

/// Runs dynamic unrolling over document shards with one sink per worker,
/// merging the partial states in worker order. Sinks must make merging
/// order-insensitive (set/map unions) for output to be independent of the
/// worker count.
template <typename Sink>
  requires MetadataSink<Sink>
Sink collect_dynamic(const DocumentCollection& collection, int threads,
                     MemoryBudget* budget, std::uint64_t* updates_out = nullptr) {
  std::vector<Sink> sinks;
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(collection.size())));
  for (int w = 0; w < workers; ++w) sinks.emplace_back(budget);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(workers), 0);
  parallel_for_ranges(collection.size(), workers,
                      [&](int w, std::size_t begin, std::size_t end) {
                        counts[static_cast<std::size_t>(w)] = dynamic_unroll_range(
                            collection, begin, end, sinks[static_cast<std::size_t>(w)]);
                      });
  for (int w = 1; w < workers; ++w) sinks[0].merge(sinks[static_cast<std::size_t>(w)]);
  if (updates_out) {
    *updates_out = 0;
    for (std::uint64_t c : counts) *updates_out += c;
  }
  return std::move(sinks[0]);
}

// ---------------------------------------------------------------------------
// Static unrolling: materialize the cross-product table.
// ---------------------------------------------------------------------------

/// One fragment of a flattened document: cells keyed by path, where an
/// empty optional is the placeholder a missing/empty value leaves behind.
using FlatFragment = std::vector<std::pair<Path, std::optional<Atom>>>;

namespace detail {

// Column/atom interning local to one unroll run. Cells carry small
// integers until the table is finalized.
struct FlattenSpace {
  std::vector<Path> columns;
  std::unordered_map<Path, std::uint32_t, PathHash> column_ids;
  std::vector<Atom> atoms;
  std::unordered_map<Atom, std::int32_t, AtomHash> atom_ids;

  std::uint32_t column(const Path& p) {
    auto it = column_ids.find(p);
    if (it != column_ids.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(columns.size());
    columns.push_back(p);
    column_ids.emplace(p, id);
    return id;
  }

  std::int32_t atom(const Atom& a) {
    auto it = atom_ids.find(a);
    if (it != atom_ids.end()) return it->second;
    const auto id = static_cast<std::int32_t>(atoms.size());
    atoms.push_back(a);
    atom_ids.emplace(a, id);
    return id;
  }
};

using Cell = std::pair<std::uint32_t, std::int32_t>;  // column, atom (-1 null)
using Frag = std::vector<Cell>;

inline bool is_empty_value(const JsonValue& v) {
  return v.is_null() || (v.is_array() && v.as_array().empty()) ||
         (v.is_object() && v.as_object().empty());
}

// Later object keys become the outer (slowest-varying) dimension, so the
// first multi-fragment key alternates fastest. Deterministic.
inline std::vector<Frag> cross_fragments(std::vector<Frag> acc, std::vector<Frag> next,
                                         MemoryBudget* budget) {
  if (next.size() == 1) {  // common case: merge in place
    for (Frag& f : acc)
      f.insert(f.end(), next[0].begin(), next[0].end());
    return acc;
  }
  std::vector<Frag> out;
  out.reserve(acc.size() * next.size());
  charge_budget(budget, acc.size() * next.size() * 16);
  for (const Frag& nf : next) {
    for (const Frag& af : acc) {
      Frag merged;
      merged.reserve(af.size() + nf.size());
      merged.insert(merged.end(), af.begin(), af.end());
      merged.insert(merged.end(), nf.begin(), nf.end());
      out.push_back(std::move(merged));
    }
  }
  return out;
}

// parent_is_array: true when `node` is itself an element of an array, in
// which case a nested array is unrolled positionally ([0], [1], ...) as a
// cross-product instead of fanning out rows. Arrays of atoms or objects
// always fan out under a `[*]` step.
inline std::vector<Frag> flatten_node(FlattenSpace& space, Path& scratch,
                                      const JsonValue& node, bool parent_is_array,
                                      MemoryBudget* budget) {
  if (is_empty_value(node)) {
    return {Frag{Cell{space.column(scratch), -1}}};
  }
  if (node.is_atom()) {
    return {Frag{Cell{space.column(scratch), space.atom(node.as_atom())}}};
  }
  if (node.is_object()) {
    std::vector<Frag> acc{Frag{}};
    for (const auto& [key, child] : node.as_object()) {
      scratch.push(Step::key(key));
      std::vector<Frag> next = flatten_node(space, scratch, child, false, budget);
      scratch.pop();
      acc = cross_fragments(std::move(acc), std::move(next), budget);
    }
    return acc;
  }
  // array
  const JsonValue::Array& elements = node.as_array();
  if (parent_is_array) {
    std::vector<Frag> acc{Frag{}};
    for (std::size_t i = 0; i < elements.size(); ++i) {
      scratch.push(Step::index(static_cast<std::uint32_t>(i)));
      std::vector<Frag> next = flatten_node(space, scratch, elements[i], false, budget);
      scratch.pop();
      acc = cross_fragments(std::move(acc), std::move(next), budget);
    }
    return acc;
  }
  std::vector<Frag> out;
  scratch.push(Step::wildcard());
  for (const JsonValue& elem : elements) {
    std::vector<Frag> sub = flatten_node(space, scratch, elem, true, budget);
    out.insert(out.end(), std::make_move_iterator(sub.begin()),
               std::make_move_iterator(sub.end()));
  }
  scratch.pop();
  return out;
}

}  // namespace detail

/// Flattens a single value rooted at `base` into row fragments: objects
/// cross-multiply their keys, arrays fan out elements under `[*]` (arrays
/// directly inside arrays unroll positionally under `[n]`), atoms yield a
/// single cell, and empty values yield one placeholder cell.
inline std::vector<FlatFragment> flatten(const Path& base, const JsonValue& value) {
  detail::FlattenSpace space;
  Path scratch = base;
  std::vector<detail::Frag> frags =
      detail::flatten_node(space, scratch, value, false, nullptr);
  std::vector<FlatFragment> out;
  out.reserve(frags.size());
  for (const detail::Frag& f : frags) {
    FlatFragment frag;
    frag.reserve(f.size());
    for (const auto& [col, atom] : f)
      frag.emplace_back(space.columns[col],
                        atom < 0 ? std::optional<Atom>{}
                                 : std::optional<Atom>{space.atoms[static_cast<std::size_t>(atom)]});
    out.push_back(std::move(frag));
  }
  return out;
}

/// The statically unrolled relation: every row carries its originating
/// document id, and all rows share one column universe, sorted by
/// serialized path. Atoms are interned; a negative cell is null.
class FlatTable {
 public:
  struct Row {
    DocId doc_id;
    std::vector<std::int32_t> cells;  // aligned with columns(), -1 = null
  };

  const std::vector<Path>& columns() const noexcept { return columns_; }
  const std::vector<std::string>& column_names() const noexcept { return column_names_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t document_count() const noexcept { return n_docs_; }

  const Atom* cell(const Row& row, std::size_t col) const noexcept {
    const std::int32_t id = row.cells[col];
    return id < 0 ? nullptr : &atoms_[static_cast<std::size_t>(id)];
  }

  double expansion_factor() const noexcept {
    return n_docs_ == 0 ? 0.0
                        : static_cast<double>(rows_.size()) / static_cast<double>(n_docs_);
  }

  /// Feeds every non-null cell to a metadata sink, row by row, with the
  /// row's document id. This is how miners consume static unrolling.
  template <typename Sink>
    requires MetadataSink<Sink>
  std::uint64_t feed(Sink& sink) const {
    std::uint64_t updates = 0;
    for (const Row& row : rows_) {
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (row.cells[c] >= 0) {
          sink.update(row.doc_id, columns_[c], atoms_[static_cast<std::size_t>(row.cells[c])]);
          ++updates;
        }
      }
    }
    return updates;
  }

 private:
  friend FlatTable static_unroll(const DocumentCollection&, int, MemoryBudget*);

  std::vector<Path> columns_;
  std::vector<std::string> column_names_;
  std::vector<Atom> atoms_;
  std::vector<Row> rows_;
  std::size_t n_docs_ = 0;
};

/// Flattens every document and normalizes the fragments to the union
/// column universe. Row order is document order, then the deterministic
/// cross-product order within each document.
inline FlatTable static_unroll(const DocumentCollection& collection, int threads = 1,
                               MemoryBudget* budget = nullptr) {
  if (collection.empty())
    throw MiningError("static unrolling requires a non-empty collection");

  struct WorkerOut {
    detail::FlattenSpace space;
    std::vector<std::pair<DocId, detail::Frag>> rows;
  };
  std::vector<WorkerOut> workers(
      static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(collection.size())))));

  parallel_for_ranges(collection.size(), threads,
                      [&](int w, std::size_t begin, std::size_t end) {
                        WorkerOut& out = workers[static_cast<std::size_t>(w)];
                        Path scratch;
                        for (std::size_t i = begin; i < end; ++i) {
                          const Document& doc = collection[i];
                          std::vector<detail::Frag> frags = detail::flatten_node(
                              out.space, scratch, doc.root, false, budget);
                          for (detail::Frag& f : frags) {
                            charge_budget(budget, 24 + f.size() * 8);
                            out.rows.emplace_back(doc.id, std::move(f));
                          }
                        }
                      });

  FlatTable table;
  table.n_docs_ = collection.size();

  // Union column universe, sorted by serialized form.
  std::unordered_map<Path, std::uint32_t, PathHash> column_ids;
  for (const WorkerOut& w : workers)
    for (const Path& p : w.space.columns)
      if (!column_ids.count(p)) {
        column_ids.emplace(p, 0);
        table.columns_.push_back(p);
      }
  std::sort(table.columns_.begin(), table.columns_.end(),
            [](const Path& a, const Path& b) { return a.serialize() < b.serialize(); });
  for (std::uint32_t i = 0; i < table.columns_.size(); ++i) {
    column_ids[table.columns_[i]] = i;
    table.column_names_.push_back(table.columns_[i].serialize());
  }

  // Remap worker-local column/atom ids and densify rows in worker order
  // (workers own contiguous document ranges, so this is document order).
  std::unordered_map<Atom, std::int32_t, AtomHash> atom_ids;
  std::size_t total_rows = 0;
  for (const WorkerOut& w : workers) total_rows += w.rows.size();
  table.rows_.reserve(total_rows);
  charge_budget(budget, total_rows * (table.columns_.size() * 4 + 16));

  for (WorkerOut& w : workers) {
    std::vector<std::uint32_t> col_remap(w.space.columns.size());
    for (std::size_t i = 0; i < w.space.columns.size(); ++i)
      col_remap[i] = column_ids[w.space.columns[i]];
    std::vector<std::int32_t> atom_remap(w.space.atoms.size());
    for (std::size_t i = 0; i < w.space.atoms.size(); ++i) {
      auto [it, inserted] =
          atom_ids.emplace(w.space.atoms[i], static_cast<std::int32_t>(table.atoms_.size()));
      if (inserted) table.atoms_.push_back(w.space.atoms[i]);
      atom_remap[i] = it->second;
    }
    for (auto& [doc_id, frag] : w.rows) {
      FlatTable::Row row;
      row.doc_id = doc_id;
      row.cells.assign(table.columns_.size(), -1);
      for (const auto& [col, atom] : frag)
        row.cells[col_remap[col]] = atom < 0 ? -1 : atom_remap[static_cast<std::size_t>(atom)];
      table.rows_.push_back(std::move(row));
    }
    w.rows.clear();
  }
  return table;
}

namespace detail {

inline std::uint64_t row_count_node(const JsonValue& node, bool parent_is_array) {
  if (is_empty_value(node) || node.is_atom()) return 1;
  if (node.is_object()) {
    std::uint64_t n = 1;
    for (const auto& [key, child] : node.as_object())
      n *= row_count_node(child, false);
    return n;
  }
  const JsonValue::Array& elements = node.as_array();
  if (parent_is_array) {
    std::uint64_t n = 1;
    for (const JsonValue& e : elements) n *= row_count_node(e, false);
    return n;
  }
  std::uint64_t n = 0;
  for (const JsonValue& e : elements) n += row_count_node(e, true);
  return n;
}

}  // namespace detail

/// Number of rows static unrolling would produce, without materializing.
inline std::uint64_t static_row_count(const DocumentCollection& collection) {
  std::uint64_t n = 0;
  for (const Document& doc : collection)
    n += detail::row_count_node(doc.root, false);
  return n;
}

/// rows / documents; 1.0 exactly when every document flattens to one row.
inline double expansion_factor(const DocumentCollection& collection) {
  if (collection.empty()) return 0.0;
  return static_cast<double>(static_row_count(collection)) /
         static_cast<double>(collection.size());
}

/// CSV export of the unrolled table for eyeballing against relational
/// tools. First column is the originating document id; nulls are empty
/// fields.
inline std::string write_csv(const FlatTable& table) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  };
  std::string out = "doc_id";
  for (const std::string& name : table.column_names()) {
    out += ',';
    out += field(name);
  }
  out += '\n';
  for (const FlatTable::Row& row : table.rows()) {
    out += std::to_string(row.doc_id);
    for (std::size_t c = 0; c < table.columns().size(); ++c) {
      out += ',';
      if (const Atom* a = table.cell(row, c)) out += field(a->to_string());
    }
    out += '\n';
  }
  return out;
}

}  // namespace nestprof
