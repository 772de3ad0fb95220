#pragma once

#include <stdexcept>
#include <string>

namespace orbitprod {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model violates a structural invariant (non-positive diagonal, self-loop,
/// duplicate or zero edge, bad parameters).
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// A quantity that must stay positive under walk-summability did not.
class NotWalkSummable : public Error {
 public:
  using Error::Error;
};

/// Enumeration or dense-matrix budget exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Determinant sign or magnitude inconsistent with the model class.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Orbit weight of modulus >= 1; the orbit factor is undefined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitprod
