#pragma once

#include <stdexcept>
#include <string>

namespace harris {

// Bad user input: invalid tables, invalid schedules, malformed configs.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime numerical failure: clock stall, Cholesky breakdown, ill-conditioned fit.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace harris
