#pragma once

#include <stdexcept>
#include <string>

namespace dvcv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands of a tensor product share a mode label.
class ModeCollisionError : public Error {
 public:
  using Error::Error;
};

/// A mode label, photon number or index lies outside the represented space.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Probability mass at a truncation boundary exceeds the admissible tail.
class TailMassError : public Error {
 public:
  using Error::Error;
};

/// An amplitude-distorting factor has a vanishing denominator.
class SingularFactorError : public Error {
 public:
  using Error::Error;
};

/// Qubit states expressed in different logical bases were combined.
class BasisMismatchError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument combination (bad range, unnormalized input, ...).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace dvcv
