#pragma once

#include <stdexcept>
#include <string>

namespace fleetflow {

// Precondition / layout / configuration violations. CLI maps these to exit 1.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public ContractError {
 public:
  using ContractError::ContractError;
};

// Non-finite values in a numeric path. CLI maps these to exit 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lost or duplicated fleet data. CLI maps these to exit 2.
class ReliabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fleetflow
