#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "divstab/polynomial.hpp"

namespace divstab {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error("at " + std::to_string(position) + ": " + message),
        position(position),
        message(message) {}
  std::size_t position;
  std::string message;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownVariableError : public ParseError {
 public:
  UnknownVariableError(std::size_t position, const std::string& name)
      : ParseError(position, "unknown variable '" + name + "'"), name(name) {}
  std::string name;
};

class NonIntegerExponentError : public ParseError {
 public:
  explicit NonIntegerExponentError(std::size_t position)
      : ParseError(position, "exponent must be an unsigned integer") {}
};

// Grammar:
//   expr     := ['-'] term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := base ('^' uint)?
//   base     := rational | ident | '(' expr ')'
//   rational := int ('/' uint)?
// Whitespace is insignificant. There is no implicit multiplication.
Polynomial parse_polynomial(const std::string& src,
                            const std::vector<std::string>& vars);

}  // namespace divstab
