#pragma once

#include <stdexcept>

namespace sfwm
{
// Invalid configuration or argument (CLI exit code 2).
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// Lookup outside a tabulated domain; never extrapolated silently.
class ExtrapolationError : public ConfigError
{
  public:
    using ConfigError::ConfigError;
};

// Measurements that the model cannot reproduce (CLI exit code 3).
class CalibrationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Root finding or search did not converge (CLI exit code 4).
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace sfwm
