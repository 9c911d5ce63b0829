#pragma once

#include <stdexcept>
#include <string>

namespace bmld {

/// Invalid geometry, configuration or arguments. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric failure at runtime (insufficient decay, no valid frames, ...).
/// CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bmld
