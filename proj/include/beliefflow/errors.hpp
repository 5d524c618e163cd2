#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beliefflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A series or iteration failed to converge (CLI exit code 3).
/// `value` holds the offending beta or the last residual.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double value)
      : Error(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

/// Alpha learning could not produce any usable candidate (CLI exit code 3).
class LearningError : public Error {
 public:
  using Error::Error;
};

}  // namespace beliefflow
