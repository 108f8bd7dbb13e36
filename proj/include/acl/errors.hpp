#pragma once

#include <stdexcept>
#include <string>

namespace acl {

// Invalid hyperparameters, bounds, or spans.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller broke an API contract (dimension mismatch, out-of-order observe, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Trace or config file could not be read back.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// External student misbehaved: bad reply, timeout, or process death.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace acl
