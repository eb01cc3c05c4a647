#pragma once

#include <stdexcept>
#include <string>

namespace hpssd {

// A sampler or transform was called with arguments outside its domain.
class ParameterError : public std::domain_error {
 public:
  explicit ParameterError(const std::string& what) : std::domain_error(what) {}
};

// A run or sweep configuration cannot be executed as given.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Persisted data (results CSV, manifest JSON) is empty or malformed.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hpssd
