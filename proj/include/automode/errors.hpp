#pragma once

#include <stdexcept>
#include <string>

namespace automode {

/// Malformed or inconsistent input files.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that parse but violate a data contract (contradictory labels, empty pools).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad hyper-parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace automode
