#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

/// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TauNonpositive : Error {
    using Error::Error;
};

struct ZeroField : Error {
    using Error::Error;
};

struct AlphaOutOfRange : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct GridTooLarge : Error {
    using Error::Error;
};

struct IncompatibleHalfSpace : Error {
    using Error::Error;
};

struct NoInteriorMax : Error {
    using Error::Error;
};

struct ShootingFailed : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct NonlinearityRejected : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace choquard
