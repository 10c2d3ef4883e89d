// errors.hpp: exception hierarchy shared by the solver modules and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace tcq {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller handed in something outside the documented preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not deliver a trustworthy result.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Photon or block cutoff too small for the requested accuracy.
class CutoffError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Truncation schedule exhausted without reaching the tolerance.
class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace tcq
