#pragma once

#include <stdexcept>
#include <string>

namespace factornet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: missing files or columns, invalid parameters, unusable data.
class InputError : public Error {
public:
    using Error::Error;
};

/// An estimator could not produce a result (rank deficiency, non-convergence, degenerate data).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace factornet
