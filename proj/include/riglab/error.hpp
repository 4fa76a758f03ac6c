#pragma once

#include <stdexcept>
#include <string>

namespace riglab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model or scaling parameters outside their valid domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A decision procedure cannot answer within its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed edge-list, assignment, or config input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Config document failed schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace riglab
