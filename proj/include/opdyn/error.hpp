#pragma once

#include <stdexcept>
#include <string>

namespace opdyn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An opinion lies outside the spectrum it is evaluated on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A deviation function is the identity (or behaves like it) where a
/// genuine deviation is required.
class InvalidDeviation : public Error {
 public:
  using Error::Error;
};

/// The continuous rule was requested on a discrete spectrum or vice versa.
class WrongRule : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments: bad partitions, non-square matrices, broken
/// preconditions that the caller can fix.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The graph carries a deviation spec with no affine-linear form.
class RepresentationUnavailable : public Error {
 public:
  using Error::Error;
};

/// The graph lies outside the regime an operation is defined for.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// A characterization does not exist for the given graph (per-pair
/// deviation heterogeneity).
class Unavailable : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the state space is too large.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace opdyn
