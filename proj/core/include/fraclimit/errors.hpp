#pragma once

#include <stdexcept>
#include <string>

namespace fraclimit {

//! Invalid configuration or parameter values.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

//! Quadrature, linear solve, or other numerical failure.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//! File read/write failure.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace fraclimit
