#pragma once

#include <cstdint>
#include <optional>

#include "psos/padic.hpp"

namespace psos {

inline constexpr int32_t default_precision = 64;

/// Parameters of the m+1-state model on the order-k tree: prime p,
/// branching order k, largest spin m, and the Boltzmann weight theta,
/// a unit in E_p (either supplied directly or as exp_p of a coupling in
/// the convergence ball).  Immutable.
class ModelParams {
 public:
  static ModelParams from_theta(uint64_t p, unsigned k, unsigned m, const PadicNumber& theta);
  static ModelParams from_theta_rational(uint64_t p, unsigned k, unsigned m,
                                         const mpq_class& theta,
                                         int32_t precision = default_precision);
  static ModelParams from_coupling(uint64_t p, unsigned k, unsigned m, const PadicNumber& j);
  static ModelParams from_coupling_rational(uint64_t p, unsigned k, unsigned m,
                                            const mpq_class& j,
                                            int32_t precision = default_precision);

  uint64_t prime() const { return p_; }
  unsigned order() const { return k_; }
  unsigned spin_max() const { return m_; }
  unsigned spin_count() const { return m_ + 1; }
  bool prime_divides_spin_count() const { return (m_ + 1) % p_ == 0; }
  const PadicNumber& theta() const { return theta_; }
  const PadicNumber& coupling() const { return j_; }
  int32_t precision() const { return theta_.precision(); }

  /// Same parameters re-embedded at a different working precision.
  /// Raising the precision requires the rational provenance of theta or
  /// J; otherwise PrecisionExhaustedError.
  ModelParams with_precision(int32_t precision) const;

 private:
  ModelParams(uint64_t p, unsigned k, unsigned m, PadicNumber theta, PadicNumber j);

  uint64_t p_;
  unsigned k_;
  unsigned m_;
  PadicNumber theta_;
  PadicNumber j_;
  std::optional<mpq_class> theta_rational_;
  std::optional<mpq_class> coupling_rational_;
};

}  // namespace psos
