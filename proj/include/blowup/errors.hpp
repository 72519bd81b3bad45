#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (non-finite input, t >= T, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to meet its tolerance or produced non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters, rule construction or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a precondition that is not a domain question (grid mismatch, step too large).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A frame change needed field values outside the mesh it was given.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace blowup
