#pragma once

#include <cstdio>
#include <string>
#include <string_view>

#include "nestprof/json_value.hpp"

namespace nestprof {

/// Escapes a string for embedding in JSON output (quotes included).
inline void append_json_string(std::string& out, std::string_view s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

namespace detail {

inline void write_value(std::string& out, const JsonValue& v) {
  if (v.is_null()) {
    out += "null";
  } else if (v.is_atom()) {
    const Atom& a = v.as_atom();
    if (a.kind() == Atom::Kind::String)
      append_json_string(out, a.as_string());
    else
      out += a.to_string();
  } else if (v.is_array()) {
    out += '[';
    bool first = true;
    for (const JsonValue& e : v.as_array()) {
      if (!first) out += ',';
      first = false;
      write_value(out, e);
    }
    out += ']';
  } else {
    out += '{';
    bool first = true;
    for (const auto& [k, e] : v.as_object()) {
      if (!first) out += ',';
      first = false;
      append_json_string(out, k);
      out += ':';
      write_value(out, e);
    }
    out += '}';
  }
}

}  // namespace detail

/// Compact single-line JSON, keys in document order. Deterministic, so
/// equal values always serialize to identical bytes.
inline std::string write_json(const JsonValue& value) {
  std::string out;
  detail::write_value(out, value);
  return out;
}

/// JSON Lines serialization of a whole collection.
inline std::string write_json_lines(const DocumentCollection& collection) {
  std::string out;
  for (const Document& doc : collection) {
    detail::write_value(out, doc.root);
    out += '\n';
  }
  return out;
}

}  // namespace nestprof
