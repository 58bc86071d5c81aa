#pragma once

#include <stdexcept>
#include <string>

namespace secrescope {

// Invalid user input or configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure: integrality, capacity, nonconvergence (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegralityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CapacityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// File system failure (CLI exit code 4).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace secrescope
