#pragma once

#include <cstdint>
#include <vector>

#include "psos/padic.hpp"

namespace psos {

/// Polynomial with p-adic coefficients, stored low degree first.
/// Evaluation and the formal derivative are exact in tracked precision.
class PadicPoly {
 public:
  explicit PadicPoly(std::vector<PadicNumber> coeffs);
  static PadicPoly from_integers(uint64_t p, const std::vector<mpz_class>& coeffs,
                                 int32_t precision);

  uint64_t prime() const { return prime_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const PadicNumber& coeff(int j) const { return coeffs_.at(static_cast<size_t>(j)); }
  const std::vector<PadicNumber>& coeffs() const { return coeffs_; }

  PadicNumber eval(const PadicNumber& x) const;
  PadicPoly derivative() const;

 private:
  uint64_t prime_;
  std::vector<PadicNumber> coeffs_;
};

/// The unique Z_p root x0 of f with x0 = a0 (mod p^(index+1)), under the
/// hypotheses f(a0) = 0 (mod p^(2*index+1)) and v_p(f'(a0)) = index, all
/// coefficients and a0 in Z_p.  Newton iteration with per-step
/// re-verification of the derivative valuation.  Throws
/// PreconditionError naming the violated congruence.
PadicNumber hensel_lift(const PadicPoly& f, const PadicNumber& a0, unsigned index,
                        int32_t target_precision);

}  // namespace psos
