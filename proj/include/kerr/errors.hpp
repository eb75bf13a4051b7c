#pragma once

#include <stdexcept>
#include <string>

namespace kerr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in Fock spaces of different truncation.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An operation requiring a Hermitian operator received one that is not.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// A state violates normalization, Hermiticity or positivity.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Population leaked into the top Fock levels beyond the hard limit.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double tail)
      : Error(what), tail_(tail) {}
  double tail() const noexcept { return tail_; }

 private:
  double tail_;
};

/// The adaptive integrator could not continue (step underflow).
class IntegratorError : public Error {
 public:
  IntegratorError(const std::string& what, double time_reached)
      : Error(what), time_reached_(time_reached) {}
  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

/// Var[M] is too small for the sensitivity ratio to be meaningful.
class DegenerateMeasurement : public Error {
 public:
  using Error::Error;
};

/// The covariance matrix of a moment basis has no usable singular values.
class SingularCovariance : public Error {
 public:
  using Error::Error;
};

/// The squeezing trace is monotone on the scanned window.
class NoInteriorMinimum : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kerr
