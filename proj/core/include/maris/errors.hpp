#pragma once

#include <stdexcept>
#include <string>

namespace maris {

/// Invalid configuration or CLI input. Maps to process exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine exceeded its iteration budget or hit a singular
/// system it could not recover from.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace maris
