#pragma once

#include <stdexcept>
#include <string>

namespace cbforms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of inputs disagree (point vs form, matrix dimension, ...).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A configurable size cap would be exceeded by an exhaustive computation.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not reach its residual targets.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Integer arithmetic would overflow 64 bits.
class Overflow : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-contract input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace cbforms
