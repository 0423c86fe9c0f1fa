#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nestprof/atom.hpp"
#include "nestprof/errors.hpp"

namespace nestprof {

/// A JSON tree: an atom, null, an array, or an object with ordered,
/// unique keys. Immutable in spirit after construction; nothing here
/// mutates a value once a document is built.
class JsonValue {
 public:
  using Array = std::vector<JsonValue>;
  /// Entries keep document order. Key uniqueness is enforced by the
  /// parser and by object().
  using Object = std::vector<std::pair<std::string, JsonValue>>;

  JsonValue() : node_(nullptr) {}

  static JsonValue null() { return JsonValue(); }
  static JsonValue atom(Atom a) { return JsonValue(Node(std::move(a))); }
  static JsonValue boolean(bool b) { return atom(Atom::boolean(b)); }
  static JsonValue integer(std::int64_t i) { return atom(Atom::integer(i)); }
  static JsonValue number(double d) { return atom(Atom::number(d)); }
  static JsonValue string(std::string s) { return atom(Atom::string(std::move(s))); }
  static JsonValue array(Array elements) {
    return JsonValue(Node(std::move(elements)));
  }

  static JsonValue object(Object entries) {
    for (std::size_t i = 0; i < entries.size(); ++i)
      for (std::size_t j = i + 1; j < entries.size(); ++j)
        if (entries[i].first == entries[j].first)
          throw StructuralError("duplicate object key '" + entries[i].first + "'");
    return JsonValue(Node(std::move(entries)));
  }

  bool is_null() const noexcept { return std::holds_alternative<std::nullptr_t>(node_); }
  bool is_atom() const noexcept { return std::holds_alternative<Atom>(node_); }
  bool is_array() const noexcept { return std::holds_alternative<Array>(node_); }
  bool is_object() const noexcept { return std::holds_alternative<Object>(node_); }

  const Atom& as_atom() const { return std::get<Atom>(node_); }
  const Array& as_array() const { return std::get<Array>(node_); }
  const Object& as_object() const { return std::get<Object>(node_); }
  Array& as_array() { return std::get<Array>(node_); }

  /// Object member lookup; nullptr when absent or not an object.
  const JsonValue* find(std::string_view key) const {
    if (!is_object()) return nullptr;
    for (const auto& [k, v] : as_object())
      if (k == key) return &v;
    return nullptr;
  }

  friend bool operator==(const JsonValue& a, const JsonValue& b) {
    return a.node_ == b.node_;
  }
  friend bool operator!=(const JsonValue& a, const JsonValue& b) {
    return !(a == b);
  }

 private:
  using Node = std::variant<std::nullptr_t, Atom, Array, Object>;
  explicit JsonValue(Node n) : node_(std::move(n)) {}

  Node node_;
};

using DocId = std::uint32_t;

/// A document: 1-based sequential id plus an object root.
struct Document {
  DocId id = 0;
  JsonValue root;
};

/// An ordered collection of documents with contiguous ids starting at 1.
class DocumentCollection {
 public:
  DocumentCollection() = default;

  /// Appends a document, assigning the next id. The root must be an object.
  DocId append(JsonValue root) {
    if (!root.is_object())
      throw StructuralError("top-level JSON value must be an object");
    const DocId id = static_cast<DocId>(docs_.size() + 1);
    docs_.push_back(Document{id, std::move(root)});
    return id;
  }

  const std::vector<Document>& documents() const noexcept { return docs_; }
  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }

  const Document& operator[](std::size_t index) const { return docs_[index]; }

  auto begin() const noexcept { return docs_.begin(); }
  auto end() const noexcept { return docs_.end(); }

 private:
  std::vector<Document> docs_;
};

}  // namespace nestprof
