#pragma once

#include <stdexcept>
#include <string>

namespace stratrew {

/// Base class of every error raised by the library. The CLI reports these
/// without terminating the session.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-sorted term, unknown sort, or no operator declaration applies.
class SortError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in module text, terms, strategies, formulas or commands.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(format(msg, line, column)), line_(line), column_(column) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& msg, int line, int column) {
    if (line <= 0) return msg;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) +
           ": " + msg;
  }
  int line_ = 0;
  int column_ = 0;
};

/// Equational reduction exceeded its rewrite budget.
class NonTerminationError : public Error {
 public:
  using Error::Error;
};

/// A strategy or model-checking search exceeded its state budget.
class SearchLimitError : public Error {
 public:
  using Error::Error;
};

/// A rule was applied with variables of its right-hand side left unbound.
class InstantiationError : public Error {
 public:
  using Error::Error;
};

/// A module transformation cannot be applied to its input.
class TransformError : public Error {
 public:
  using Error::Error;
};

/// An atomic proposition did not reduce to true or false.
class PropositionError : public Error {
 public:
  using Error::Error;
};

}  // namespace stratrew
