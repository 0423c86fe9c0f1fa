#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nestprof/errors.hpp"

namespace nestprof {

/// One step of a path: an object key, an array wildcard `[*]`, or a fixed
/// array index `[n]`. Mining only ever produces Key and Wildcard steps;
/// Index steps appear in user-supplied paths (and in statically unrolled
/// column names for arrays nested directly inside arrays).
class Step {
 public:
  enum class Kind : std::uint8_t { Key, Wildcard, Index };

  static Step key(std::string name) { return Step(Kind::Key, std::move(name), 0); }
  static Step wildcard() { return Step(Kind::Wildcard, {}, 0); }
  static Step index(std::uint32_t n) { return Step(Kind::Index, {}, n); }

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  std::uint32_t index() const noexcept { return index_; }

  friend bool operator==(const Step& a, const Step& b) noexcept {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.index_ == b.index_;
  }
  friend auto operator<=>(const Step& a, const Step& b) noexcept {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    return a.index_ <=> b.index_;
  }

 private:
  Step(Kind kind, std::string name, std::uint32_t index)
      : kind_(kind), name_(std::move(name)), index_(index) {}

  Kind kind_;
  std::string name_;
  std::uint32_t index_;
};

/// A restricted JSONPath rooted at `$`: dot keys, `[*]`, `[n]`.
/// Key names containing `.`, `[`, `]`, `$`, or `'` (or empty names) are
/// written bracket-quoted as `['na.me']` with backslash escapes for `'`
/// and `\`, which keeps parse(serialize(p)) == p for every path.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<Step> steps) : steps_(std::move(steps)) {}

  static Path root() { return Path(); }

  const std::vector<Step>& steps() const noexcept { return steps_; }
  bool empty() const noexcept { return steps_.empty(); }
  std::size_t size() const noexcept { return steps_.size(); }

  Path child(Step step) const {
    std::vector<Step> s = steps_;
    s.push_back(std::move(step));
    return Path(std::move(s));
  }
  Path key(std::string name) const { return child(Step::key(std::move(name))); }
  Path wildcard() const { return child(Step::wildcard()); }
  Path index(std::uint32_t n) const { return child(Step::index(n)); }

  void push(Step step) { steps_.push_back(std::move(step)); }
  void pop() { steps_.pop_back(); }

  std::string serialize() const {
    std::string out = "$";
    for (const Step& s : steps_) {
      switch (s.kind()) {
        case Step::Kind::Key:
          if (needs_quoting(s.name())) {
            out += "['";
            for (char c : s.name()) {
              if (c == '\'' || c == '\\') out += '\\';
              out += c;
            }
            out += "']";
          } else {
            out += '.';
            out += s.name();
          }
          break;
        case Step::Kind::Wildcard:
          out += "[*]";
          break;
        case Step::Kind::Index:
          out += '[';
          out += std::to_string(s.index());
          out += ']';
          break;
      }
    }
    return out;
  }

  static Path parse(std::string_view text) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) -> void {
      throw PathParseError("bad path '" + std::string(text) + "': " + why);
    };
    if (text.empty() || text[0] != '$') fail("must start with '$'");
    pos = 1;
    std::vector<Step> steps;
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '.') {
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != '.' && text[pos] != '[') ++pos;
        if (pos == start) fail("empty key after '.'");
        steps.push_back(Step::key(std::string(text.substr(start, pos - start))));
      } else if (c == '[') {
        ++pos;
        if (pos >= text.size()) fail("unterminated '['");
        if (text[pos] == '*') {
          ++pos;
          if (pos >= text.size() || text[pos] != ']') fail("expected ']' after '*'");
          ++pos;
          steps.push_back(Step::wildcard());
        } else if (text[pos] == '\'') {
          ++pos;
          std::string name;
          bool closed = false;
          while (pos < text.size()) {
            char q = text[pos];
            if (q == '\\') {
              ++pos;
              if (pos >= text.size()) fail("dangling escape");
              name += text[pos];
              ++pos;
            } else if (q == '\'') {
              ++pos;
              closed = true;
              break;
            } else {
              name += q;
              ++pos;
            }
          }
          if (!closed) fail("unterminated quoted key");
          if (pos >= text.size() || text[pos] != ']') fail("expected ']' after quoted key");
          ++pos;
          steps.push_back(Step::key(std::move(name)));
        } else {
          std::uint64_t n = 0;
          std::size_t start = pos;
          while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            n = n * 10 + static_cast<std::uint64_t>(text[pos] - '0');
            ++pos;
          }
          if (pos == start) fail("expected index, '*', or quoted key in brackets");
          if (pos >= text.size() || text[pos] != ']') fail("expected ']' after index");
          if (n > UINT32_MAX) fail("index out of range");
          ++pos;
          steps.push_back(Step::index(static_cast<std::uint32_t>(n)));
        }
      } else {
        fail("unexpected character '" + std::string(1, c) + "'");
      }
    }
    return Path(std::move(steps));
  }

  friend bool operator==(const Path& a, const Path& b) noexcept {
    return a.steps_ == b.steps_;
  }
  friend bool operator!=(const Path& a, const Path& b) noexcept { return !(a == b); }
  friend bool operator<(const Path& a, const Path& b) noexcept {
    return a.steps_ < b.steps_;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 0x811c9dc5u;
    for (const Step& s : steps_) {
      h ^= static_cast<std::size_t>(s.kind()) + 0x9e3779b9u + (h << 6) + (h >> 2);
      h ^= std::hash<std::string>{}(s.name()) + 0x9e3779b9u + (h << 6) + (h >> 2);
      h ^= std::hash<std::uint32_t>{}(s.index()) + 0x9e3779b9u + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  static bool needs_quoting(std::string_view name) {
    if (name.empty()) return true;
    for (char c : name)
      if (c == '.' || c == '[' || c == ']' || c == '$' || c == '\'' || c == '\\')
        return true;
    return false;
  }

  std::vector<Step> steps_;
};

struct PathHash {
  std::size_t operator()(const Path& p) const noexcept { return p.hash(); }
};

}  // namespace nestprof
