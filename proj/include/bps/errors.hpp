#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bps {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, out-of-range parameters, non-finite
/// amplitudes. Distinct from a normalization failure, which is reported
/// through ValidationReport rather than thrown.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A requested truncation exceeds the configured element budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// State-file syntax error, located by 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Internal cross-check failure. Signals a bug, not a data condition.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace bps
