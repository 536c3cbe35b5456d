#pragma once

#include <stdexcept>
#include <string>

namespace mvindep {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Argument inside the domain but outside the range an implementation supports.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Root finder called on an interval without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Iterative procedure ran out of budget. Carries the best estimate it had.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Data that cannot be standardized: coincident points, rank-deficient scatter.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// Invalid model specification (bad family parameters, singular mixing matrix).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Malformed user input (files, configs, command-line values).
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace mvindep
