#pragma once

#include <stdexcept>
#include <string>

namespace cfceval {

/// Malformed or unusable input data (dataset records, unlexable references).
/// Maps to CLI exit code 1.
class InputError : public std::runtime_error {
  public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (bad weights, empty reference list, unknown keys).
/// Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cfceval
