#pragma once

#include <stdexcept>
#include <string>

namespace drinv {

// Thrown when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed input files: catalog/demand CSVs, configs, checkpoints.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration or unusable output location.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Explicit state-space enumeration would exceed the configured cap.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace drinv
