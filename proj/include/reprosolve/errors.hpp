#pragma once

#include <stdexcept>
#include <string>

namespace reprosolve {

// Bad caller-supplied data (dimensions, empty samples, degenerate specs).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Bad solver/experiment configuration (stepsizes, moduli, oracle kinds).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A metric was requested on a problem that cannot supply it.
class UnsupportedMetricError : public std::runtime_error {
 public:
  explicit UnsupportedMetricError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace reprosolve
