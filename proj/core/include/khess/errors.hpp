#pragma once

#include <stdexcept>
#include <string>

namespace khess {

/// Input outside the domain of an operation (bad dimension, negative
/// coordinate, tau outside (0,1), ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive integration could not proceed: step-size underflow, step budget
/// exhausted, or a non-finite state.
class IntegrationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace khess
