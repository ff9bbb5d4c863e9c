#pragma once
// Error taxonomy. Everything thrown by the library derives from nvlab::Error
// so the CLI can map failures onto exit codes in one place.

#include <stdexcept>
#include <string>

namespace nvlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input that a caller could have checked (parse errors, out-of-range
// parameters, malformed words). CLI maps these to exit code 1.
struct UsageError : Error {
    using Error::Error;
};

// An internal invariant or verification predicate failed. Exit code 2.
struct InvariantError : Error {
    using Error::Error;
};

// A numerical routine could not reach its target accuracy. Exit code 3.
struct NonConvergence : Error {
    using Error::Error;
};

struct InvalidExponentPair : UsageError {
    using UsageError::UsageError;
};

struct NonInvertible : UsageError {
    using UsageError::UsageError;
};

struct SquarefreeRequired : UsageError {
    using UsageError::UsageError;
};

// Root numbers are only defined for primitive characters.
struct RootNumberUndefined : UsageError {
    using UsageError::UsageError;
};

// Mollifier window/application-range violations (theta outside the
// admissible window, eps >= theta, ...).
struct ProvisoViolated : UsageError {
    using UsageError::UsageError;
};

// Work size beyond the supported envelope (e.g. bilinear forms > 1e7 terms).
struct TooLarge : UsageError {
    using UsageError::UsageError;
};

// Denominator of a ratio collapsed below the representable floor.
struct DegenerateDenominator : InvariantError {
    using InvariantError::InvariantError;
};

} // namespace nvlab
