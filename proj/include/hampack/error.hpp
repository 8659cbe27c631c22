#pragma once

#include <stdexcept>
#include <string>

namespace hampack {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configuration (constants, probabilities) is outside the usable range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed edge-list, report or configuration text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant of the merging loop does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace hampack
