#pragma once

#include <stdexcept>
#include <string>

namespace qbat {

// Invalid user-facing configuration. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at run time: singular solve, resonant denominator,
// integration breakdown, state-invariant violation. CLI exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qbat
