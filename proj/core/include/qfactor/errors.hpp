#pragma once

#include <stdexcept>
#include <string>

namespace qfactor {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands whose shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition (non-unitary input,
/// invalid matrix units, bad weight vector, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A randomized numerical procedure could not reach a certified answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfactor
