#pragma once

#include <stdexcept>
#include <string>

namespace tetrapol {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A Stokes vector with non-positive total intensity where intensity is required.
struct ZeroIntensity : Error {
    using Error::Error;
};

/// A coherency matrix that fails Hermiticity/positivity/trace checks.
struct NotAState : Error {
    using Error::Error;
};

/// A state failed the purity check required by a pure-state-only operation.
struct NotPure : Error {
    using Error::Error;
};

/// A detection channel has (numerically) zero amplitude; no frame vector exists.
struct DegenerateFrame : Error {
    using Error::Error;
};

/// A matrix is numerically singular (condition number above threshold).
struct Singular : Error {
    using Error::Error;
};

/// Calibration states do not span the Stokes space.
struct Coplanar : Error {
    using Error::Error;
};

/// Input state has degree of polarization above 1 beyond tolerance.
struct Unphysical : Error {
    using Error::Error;
};

/// A count vector with all entries zero where counts are required.
struct EmptyCounts : Error {
    using Error::Error;
};

/// Reconstructed total intensity is non-positive.
struct NegativeIntensity : Error {
    using Error::Error;
};

/// Invalid or inconsistent configuration input.
struct ConfigError : Error {
    using Error::Error;
};

/// File could not be read or written.
struct IoError : Error {
    using Error::Error;
};

} // namespace tetrapol
