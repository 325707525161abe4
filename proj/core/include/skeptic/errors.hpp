#pragma once

#include <stdexcept>
#include <string>

namespace skeptic {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input record. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_ = 0;
};

/// Input violated a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The host environment is broken (missing interpreter, fork failure).
/// Never mapped to a judging status.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

/// Remote generation failed after exhausting retries, or the request was
/// terminally rejected.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A scripted mock backend ran out of responses.
class ScriptUnderflowError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent runtime configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace skeptic
