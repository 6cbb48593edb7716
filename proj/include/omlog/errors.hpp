#pragma once

#include <stdexcept>
#include <string>

namespace omlog {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed, missing or empty input data.
class DataError : public Error {
public:
    using Error::Error;
};

// Invalid configuration or usage.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Non-finite values or diverging optimisation.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace omlog
