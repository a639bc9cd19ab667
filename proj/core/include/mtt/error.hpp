#pragma once

#include <stdexcept>
#include <string>

namespace mtt {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (shape mismatch, invalid row, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Singular innovation covariance, non-finite activations, diverging loss.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A scan carries more measurements than the network has slots for.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// JPDA joint-event enumeration would exceed its event budget.
class ComplexityError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration document; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

/// Malformed or incompatible file (model, CSV).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtt
