#pragma once

#include <stdexcept>
#include <string>

namespace stefan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid problem definition, discretization or user configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A boundary curve that cannot be used as a moving front (s^n <= 0 for n >= 1).
class CurveError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown: zero pivot, singular system, non-finite values.
class SolveError : public Error {
public:
    using Error::Error;
};

}  // namespace stefan
