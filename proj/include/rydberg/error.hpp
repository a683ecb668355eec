#pragma once

#include <stdexcept>
#include <string>

namespace rydberg {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands live on different bases or have incompatible dimensions.
class BasisMismatchError : public Error {
public:
    using Error::Error;
};

// A value violates a type invariant (non-Hermitian matrix, unnormalized
// state, negative duration, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Unknown basis label or column name.
class LookupError : public Error {
public:
    using Error::Error;
};

// A physical configuration is inconsistent or out of range.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Nonlinear fit did not converge or the data does not constrain the model.
class FitError : public Error {
public:
    using Error::Error;
};

// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace rydberg
