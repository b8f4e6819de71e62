#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcfuse {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input line. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The same (query, doc) pair appears twice in one run.
class DuplicateError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A qrels file judges the same (query, doc) pair with two different grades.
class ConflictError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A run file mixes several run tags.
class InconsistencyError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Vectors or system lists that must line up do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class RegressionError : public Error {
 public:
  using Error::Error;
};

}  // namespace lcfuse
