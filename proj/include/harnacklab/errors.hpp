#pragma once

#include <stdexcept>
#include <string>

namespace hl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A jet does not carry enough Taylor coefficients for the requested operation.
class OrderError : public Error {
public:
    using Error::Error;
};

/// Division by a jet with vanishing constant term, or an analytic function
/// evaluated outside its domain.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// Point outside a chart, non positive-definite metric, invalid time, ...
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration (order too small, bad tolerance, bad flag value).
class ConfigError : public Error {
public:
    using Error::Error;
};

class UnknownNameError : public Error {
public:
    using Error::Error;
};

} // namespace hl
