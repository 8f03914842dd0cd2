#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmpsbm {

/// Array or tensor dimensions that do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that is well-formed but violates a model invariant
/// (node index out of range, self-loop, non-positive hyperparameter, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hmpsbm
