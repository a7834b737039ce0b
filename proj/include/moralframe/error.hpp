#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moralframe {

// Base for every error raised by the library. The CLI maps these to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// Numeric precondition violated (zero norm, length mismatch, degenerate input).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but cannot support the requested computation
// (empty store, unresolvable lexicon cell, no scorable documents, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace moralframe
