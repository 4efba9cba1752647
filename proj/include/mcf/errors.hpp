#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

/// Invalid user-supplied configuration or precondition violation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a closed-form expression.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside a solver (step underflow, bracket blow-up, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two fields or states that must share a grid/form do not.
class MismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mcf
