#pragma once

#include <stdexcept>
#include <string>

namespace possib {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different sample spaces, an index is out of range, or a
/// container has the wrong shape.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument lies outside the operation's domain (r <= 0, eps <= 0,
/// delta outside (0, 2), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant (weights outside [0,1], max weight != 1,
/// non-finite values, non-positive psi).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Scenario document does not follow the schema. `path()` names the offending
/// field, e.g. "distribution.weights.b".
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace possib
