#pragma once

#include <stdexcept>
#include <string>

namespace cornergas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (bad angle data, r <= 1, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A constructed boundary is not a Jordan curve at the test resolution.
class NotSimpleCurve : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed: lost positive definiteness, quadrature did
/// not converge, branch tracking broke down.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Sampling radii too close: g(z) - g(w) vanished at a grid node.
class RadiiCollision : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Adjacent samples of a logarithm differ by more than the unwrap tolerance.
class BranchError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace cornergas
