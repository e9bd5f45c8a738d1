#pragma once

#include <stdexcept>
#include <string>

namespace gibbs {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (bad counts, unknown keys, malformed files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operation called on a state that violates its precondition.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Dynamics cannot proceed (membrane left the box, trapped particle, timeout).
class SimulationError : public Error {
 public:
  using Error::Error;
};

class ThermostatError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace gibbs
