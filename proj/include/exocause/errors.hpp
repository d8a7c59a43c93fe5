#pragma once

#include <stdexcept>
#include <string>

namespace exocause {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct TooFewRows : Error {
    using Error::Error;
};

struct DegenerateVariable : Error {
    using Error::Error;
};

struct OptimizationFailure : Error {
    using Error::Error;
};

struct RootNotFound : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct TooManyFailures : Error {
    using Error::Error;
};

struct NonPositiveVariance : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace exocause
