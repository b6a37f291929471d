#pragma once

#include <stdexcept>
#include <string>

namespace psos {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands carry different primes.
struct PrimeMismatchError : Error {
  using Error::Error;
};

/// Division by a value that is zero at its tracked precision.
struct DivisionByZeroError : Error {
  using Error::Error;
};

/// A result (or a decision about one) is not representable at the
/// precision carried by the inputs.
struct PrecisionExhaustedError : Error {
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation
/// (exp/log convergence ball, square-root nonexistence, theta not a
/// suitable unit, invalid prime, ...).
struct DomainError : Error {
  using Error::Error;
};

/// A stated precondition fails; the message names the violated condition.
struct PreconditionError : Error {
  using Error::Error;
};

/// An iterative solver failed to stabilize within its iteration budget.
struct NonConvergenceError : Error {
  using Error::Error;
};

/// An enumeration would exceed the configured cap.
struct CapExceededError : Error {
  using Error::Error;
};

/// Malformed textual or JSON input.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace psos
