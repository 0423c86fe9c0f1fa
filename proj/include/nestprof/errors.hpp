#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nestprof {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed JSON input. `line()` is 1-based when known, 0 otherwise.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed JSON that violates a structural requirement
/// (e.g. a top-level value that is not an object).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Invalid path expression text.
class PathParseError : public Error {
 public:
  using Error::Error;
};

/// A mining operation cannot run on the given input
/// (empty metadata, too few documents, ...).
class MiningError : public Error {
 public:
  using Error::Error;
};

/// Invalid or contradictory generator configuration.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// The configured memory budget was exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace nestprof
