#pragma once

#include <set>
#include <vector>

#include "nestprof/json_value.hpp"
#include "nestprof/path.hpp"

namespace nestprof {

/// The set of atomic values a document holds at a path. Null, arrays,
/// and objects never appear in a value set.
using ValueSet = std::set<Atom>;

namespace detail {

inline void eval_steps(const JsonValue& node, const std::vector<Step>& steps,
                       std::size_t at, ValueSet& out) {
  if (at == steps.size()) {
    if (node.is_atom()) out.insert(node.as_atom());
    return;
  }
  const Step& step = steps[at];
  switch (step.kind()) {
    case Step::Kind::Key:
      if (const JsonValue* child = node.find(step.name()))
        eval_steps(*child, steps, at + 1, out);
      break;
    case Step::Kind::Wildcard:
      if (node.is_array())
        for (const JsonValue& elem : node.as_array())
          eval_steps(elem, steps, at + 1, out);
      break;
    case Step::Kind::Index:
      if (node.is_array() && step.index() < node.as_array().size())
        eval_steps(node.as_array()[step.index()], steps, at + 1, out);
      break;
  }
}

}  // namespace detail

/// All atomic values reachable from the document root by following the
/// path. Keys descend into objects, `[*]` fans out over array elements,
/// `[n]` selects one element. Anything missing contributes nothing, so a
/// path that matches nowhere yields the empty set.
inline ValueSet evaluate_path(const Document& doc, const Path& path) {
  ValueSet out;
  detail::eval_steps(doc.root, path.steps(), 0, out);
  return out;
}

inline ValueSet evaluate_path(const JsonValue& root, const Path& path) {
  ValueSet out;
  detail::eval_steps(root, path.steps(), 0, out);
  return out;
}

/// True when the value sets of two documents at `path` share an atom.
inline bool value_sets_intersect(const ValueSet& a, const ValueSet& b) {
  if (a.size() > b.size()) return value_sets_intersect(b, a);
  for (const Atom& v : a)
    if (b.count(v)) return true;
  return false;
}

namespace detail {

inline void collect_leaf_paths(const JsonValue& node, Path& scratch,
                               std::set<Path>& out) {
  if (node.is_object()) {
    for (const auto& [key, child] : node.as_object()) {
      scratch.push(Step::key(key));
      collect_leaf_paths(child, scratch, out);
      scratch.pop();
    }
  } else if (node.is_array()) {
    scratch.push(Step::wildcard());
    for (const JsonValue& elem : node.as_array())
      collect_leaf_paths(elem, scratch, out);
    scratch.pop();
  } else if (node.is_atom()) {
    out.insert(scratch);
  }
  // null: nothing
}

}  // namespace detail

/// The candidate attribute universe: every Key/Wildcard path at which at
/// least one document holds an atomic non-null value.
inline std::set<Path> enumerate_paths(const DocumentCollection& collection) {
  std::set<Path> out;
  Path scratch;
  for (const Document& doc : collection)
    detail::collect_leaf_paths(doc.root, scratch, out);
  return out;
}

}  // namespace nestprof
