#pragma once

#include <stdexcept>
#include <string>

namespace simplexvol {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: function-spec strings, simplex shorthands, files.
struct ParseError : Error {
    using Error::Error;
};

/// A documented precondition does not hold (degenerate geometry, domain
/// violations, divergent integrals, failed invariant checks).
struct PreconditionError : Error {
    using Error::Error;
};

struct DegenerateSimplexError : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct DomainError : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct DivergentIntegralError : PreconditionError {
    using PreconditionError::PreconditionError;
};

/// Floating-point failure: overflow, non-convergent iteration.
struct NumericError : Error {
    using Error::Error;
};

struct OverflowError : NumericError {
    using NumericError::NumericError;
};

} // namespace simplexvol
