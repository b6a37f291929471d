#pragma once

#include <cstdint>

#include "psos/padic.hpp"

namespace psos {

/// p-adic exponential: sum of x^n/n! truncated once the tail is provably
/// below the absolute precision of x.  Requires |x|_p <= p^-1 for odd p
/// and |x|_2 <= 2^-2 (throws DomainError outside the convergence ball).
/// The result is a unit with |exp_p(x) - 1|_p = |x|_p.
PadicNumber exp_p(const PadicNumber& x);

/// p-adic logarithm of x = 1 + h, |h|_p < 1 (throws DomainError outside
/// B(1,1)).  Alternating series, truncated against the absolute
/// precision of h.
PadicNumber log_p(const PadicNumber& x);

/// Outcome of the square-root existence test: the valuation must be even
/// and, for odd p, the leading digit a quadratic residue mod p; for
/// p = 2 the unit must be 1 mod 8.  `residue` is the smallest r in
/// [1, p) with r^2 = a_0 (mod p) (1 for p = 2), the starting point of
/// the lift.
struct SqrtWitness {
  bool exists = false;
  uint64_t residue = 0;
  const char* reason = "";  // set when exists is false
};

SqrtWitness sqrt_exists(const PadicNumber& a);

/// The square root whose leading residue matches the witness (the other
/// root is its negation).  Throws DomainError when no root exists.
PadicNumber sqrt(const PadicNumber& a);

}  // namespace psos
