#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lore {

/// Invalid numeric parameter (probability out of range, m >= n, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// API misuse: mismatched shapes, missing cache, inconsistent configs.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed edge-list input. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lore
