#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nestprof/json_value.hpp"

namespace nestprof {

enum class InputFormat { JsonLines, JsonArray };

inline InputFormat parse_input_format(std::string_view name) {
  if (name == "json-lines") return InputFormat::JsonLines;
  if (name == "json-array") return InputFormat::JsonArray;
  throw ParseError(0, "unknown input format '" + std::string(name) + "'");
}

namespace detail {

/// SAX handler that builds a JsonValue tree directly, rejecting duplicate
/// keys as it goes. nlohmann's DOM would silently keep the last duplicate.
class ValueBuilder {
 public:
  using number_integer_t = std::int64_t;
  using number_unsigned_t = std::uint64_t;
  using number_float_t = double;
  using string_t = std::string;
  using binary_t = nlohmann::json::binary_t;

  bool null() { return emit(JsonValue::null()); }
  bool boolean(bool b) { return emit(JsonValue::boolean(b)); }
  bool number_integer(number_integer_t i) { return emit(JsonValue::integer(i)); }
  bool number_unsigned(number_unsigned_t u) {
    return emit(JsonValue::atom(Atom::number_unsigned(u)));
  }
  bool number_float(number_float_t d, const string_t&) {
    return emit(JsonValue::number(d));
  }
  bool string(string_t& s) { return emit(JsonValue::string(s)); }
  bool binary(binary_t&) {
    error_ = "binary values are not valid JSON";
    return false;
  }

  bool start_object(std::size_t) {
    stack_.push_back(Frame{Frame::Object, {}, {}, {}});
    return true;
  }

  bool key(string_t& k) {
    Frame& top = stack_.back();
    for (const auto& [existing, _] : top.entries) {
      if (existing == k) {
        error_ = "duplicate object key '" + k + "'";
        return false;
      }
    }
    top.pending_key = k;
    return true;
  }

  bool end_object() {
    Frame frame = std::move(stack_.back());
    stack_.pop_back();
    return emit(JsonValue::object(std::move(frame.entries)));
  }

  bool start_array(std::size_t) {
    stack_.push_back(Frame{Frame::Array, {}, {}, {}});
    return true;
  }

  bool end_array() {
    Frame frame = std::move(stack_.back());
    stack_.pop_back();
    return emit(JsonValue::array(std::move(frame.elements)));
  }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::json::exception& ex) {
    error_position_ = position;
    error_ = ex.what();
    // Keep only the description: drop nlohmann's exception tag and its
    // own position prefix (the thrown ParseError carries the location).
    if (auto at = error_.find("] "); at != std::string::npos)
      error_ = error_.substr(at + 2);
    if (error_.rfind("parse error at line ", 0) == 0) {
      if (auto colon = error_.find(": "); colon != std::string::npos)
        error_ = error_.substr(colon + 2);
    }
    return false;
  }

  JsonValue take_result() { return std::move(result_); }
  const std::string& error() const { return error_; }
  std::size_t error_position() const { return error_position_; }

 private:
  struct Frame {
    enum Kind { Object, Array } kind;
    JsonValue::Object entries;
    JsonValue::Array elements;
    std::string pending_key;
  };

  bool emit(JsonValue value) {
    if (stack_.empty()) {
      result_ = std::move(value);
      return true;
    }
    Frame& top = stack_.back();
    if (top.kind == Frame::Object)
      top.entries.emplace_back(std::move(top.pending_key), std::move(value));
    else
      top.elements.push_back(std::move(value));
    return true;
  }

  std::vector<Frame> stack_;
  JsonValue result_;
  std::string error_;
  std::size_t error_position_ = 0;
};

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace detail

/// Parses one complete JSON text into a JsonValue. `line` seeds error
/// reporting (the 1-based line the text starts on).
inline JsonValue parse_json_text(std::string_view text, std::size_t line = 0) {
  detail::ValueBuilder builder;
  if (!nlohmann::json::sax_parse(text, &builder, nlohmann::json::input_format_t::json,
                                 /*strict=*/true)) {
    std::size_t at = line;
    std::string message = builder.error().empty() ? "malformed JSON" : builder.error();
    if (line && builder.error_position()) {
      const std::size_t offset = builder.error_position() - 1;
      at = line + detail::line_of_offset(text, offset) - 1;
      std::size_t line_start = 0;
      if (offset > 0) {
        const std::size_t nl = text.rfind('\n', offset - 1);
        if (nl != std::string_view::npos) line_start = nl + 1;
      }
      message = "column " + std::to_string(offset - line_start + 1) + ": " + message;
    }
    throw ParseError(at, message);
  }
  return builder.take_result();
}

/// Parses a document collection from UTF-8 text. JSON Lines: one object
/// per line, blank lines skipped. JSON array: a single top-level array of
/// objects. Documents get ids 1..n in input order.
inline DocumentCollection parse_collection(std::string_view input, InputFormat format) {
  DocumentCollection collection;
  if (format == InputFormat::JsonLines) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= input.size()) {
      std::size_t eol = input.find('\n', pos);
      std::string_view line = eol == std::string_view::npos
                                  ? input.substr(pos)
                                  : input.substr(pos, eol - pos);
      ++line_no;
      pos = eol == std::string_view::npos ? input.size() + 1 : eol + 1;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      JsonValue value = parse_json_text(line, line_no);
      if (!value.is_object())
        throw StructuralError("line " + std::to_string(line_no) +
                              ": top-level value must be an object");
      collection.append(std::move(value));
    }
    return collection;
  }

  JsonValue top = parse_json_text(input, 1);
  if (!top.is_array())
    throw StructuralError("json-array input must have a top-level array");
  std::size_t index = 0;
  for (JsonValue& elem : top.as_array()) {
    ++index;
    if (!elem.is_object())
      throw StructuralError("document " + std::to_string(index) +
                            ": top-level value must be an object");
    collection.append(std::move(elem));
  }
  return collection;
}

inline DocumentCollection parse_collection(std::istream& in, InputFormat format) {
  std::string text(std::istreambuf_iterator<char>(in), {});
  return parse_collection(text, format);
}

}  // namespace nestprof
