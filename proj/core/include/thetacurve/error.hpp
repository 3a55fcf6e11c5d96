#pragma once

#include <stdexcept>
#include <string>

namespace thetacurve {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (too few samples, degenerate segments, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A parameter set violates a bound required by the closed-form families.
/// The message names the violated bound, e.g. "d < 2a^2".
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The check is meaningless for this input (e.g. a geodesic has no first integral to fit).
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// The variational problem is trivial (a = 0: every admissible curve is critical).
class TrivialProblem : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace thetacurve
