#include "hmpsbm/errors.hpp"

namespace hmpsbm {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

}  // namespace hmpsbm
