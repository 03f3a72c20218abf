#pragma once

#include <stdexcept>
#include <string>

namespace morl {

// Raised when a caller breaks an operation's precondition (dimension
// mismatch, invalid action id, malformed weights, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a configuration is well-formed but cannot be run, e.g. the
// Pareto Q-learning state cap is exceeded.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace morl
