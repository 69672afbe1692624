#pragma once

#include <stdexcept>
#include <string>

namespace triphoton {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid inputs: bad dimensions, malformed files, out-of-range indices,
/// violated type invariants.  Maps to CLI exit code 2.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Failures during computation: singular fits, undefined visibilities,
/// inconsistent measurement data, unstable resampling.  Maps to CLI exit
/// code 3.
class NumericalError : public Error {
  public:
    using Error::Error;
};

}  // namespace triphoton
