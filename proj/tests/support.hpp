#pragma once

#include <random>
#include <vector>

#include "psos/padic.hpp"

namespace psos::testsupport {

/// Deterministic generator of random p-adic values for property tests.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t below(uint64_t n) { return eng_() % n; }

  /// Random integer with `count` base-p digits (may be zero).
  mpz_class digits_number(uint64_t p, int32_t count) {
    mpz_class v = 0;
    mpz_class scale = 1;
    for (int32_t i = 0; i < count; ++i) {
      v += scale * static_cast<unsigned long>(below(p));
      scale *= static_cast<unsigned long>(p);
    }
    return v;
  }

  PadicNumber unit(uint64_t p, int32_t prec) {
    mpz_class u = digits_number(p, prec - 1) * static_cast<unsigned long>(p) +
                  static_cast<unsigned long>(1 + below(p - 1));
    return PadicNumber::from_unit(p, 0, u, prec);
  }

  /// Random element of E_p: 1 + p^t * (t-digit-shifted random integer).
  PadicNumber in_ep(uint64_t p, int32_t prec) {
    int64_t t = ep_threshold(p);
    mpz_class u = 1 + prime_power(p, t) * digits_number(p, prec - static_cast<int32_t>(t));
    return PadicNumber::from_unit(p, 0, u, prec);
  }

  /// Random element of the exp_p convergence ball (may be zero).
  PadicNumber exp_domain(uint64_t p, int32_t prec) {
    int64_t t = ep_threshold(p);
    mpz_class r = digits_number(p, prec);
    if (r == 0) return PadicNumber::zero(p, prec + t);
    int64_t v = integer_valuation(r, p);
    return PadicNumber::from_unit(p, t + v, r / prime_power(p, v), prec);
  }

  /// Random nonzero value with valuation in [vmin, vmax].
  PadicNumber nonzero(uint64_t p, int32_t prec, int64_t vmin, int64_t vmax) {
    int64_t v = vmin + static_cast<int64_t>(below(static_cast<uint64_t>(vmax - vmin + 1)));
    return PadicNumber::from_unit(p, v, unit(p, prec).unit(), prec);
  }

  /// Random E_p vector, optionally with last component normalized to 1.
  std::vector<PadicNumber> ep_vector(uint64_t p, int32_t prec, size_t len, bool last_one) {
    std::vector<PadicNumber> z;
    z.reserve(len);
    for (size_t i = 0; i < len; ++i) z.push_back(in_ep(p, prec));
    if (last_one) z.back() = PadicNumber::one(p, prec);
    return z;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace psos::testsupport
