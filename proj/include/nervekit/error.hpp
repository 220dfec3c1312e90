#pragma once

#include <stdexcept>
#include <string>

namespace nervekit {

/// Input failed validation (bad matrix, malformed cover, out-of-range parameter).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold for otherwise valid input.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A construction was attempted but its postcondition could not be met
/// (e.g. a lifted cover whose nerve is not isomorphic to the source nerve).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nervekit
