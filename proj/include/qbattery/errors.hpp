#pragma once

#include <stdexcept>
#include <string>

namespace qbattery {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameter values, non-Hermitian operators, wrong dimensions.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Requested Hilbert space exceeds the configured size limit.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Spectrum too narrow to rescale onto [-1, 1].
class DegenerateSpectrumError : public Error {
public:
    using Error::Error;
};

/// Too many realizations of a quenched average failed.
class AggregateError : public Error {
public:
    using Error::Error;
};

}  // namespace qbattery
