#include "psos/model.hpp"

#include "psos/analytic.hpp"
#include "psos/errors.hpp"

namespace psos {

namespace {

void validate_shape(uint64_t p, unsigned k, unsigned m) {
  validate_prime(p);
  if (k < 1) throw DomainError("tree order k must be >= 1");
  if (m < 1) throw DomainError("largest spin m must be >= 1");
}

void require_ep(const PadicNumber& theta) {
  if (!domain_flags(theta).in_Ep) {
    throw DomainError("theta must lie in E_p (unit with |theta-1|_p <= p^-" +
                      std::to_string(ep_threshold(theta.prime())) + ")");
  }
}

}  // namespace

ModelParams::ModelParams(uint64_t p, unsigned k, unsigned m, PadicNumber theta, PadicNumber j)
    : p_(p), k_(k), m_(m), theta_(std::move(theta)), j_(std::move(j)) {}

ModelParams ModelParams::from_theta(uint64_t p, unsigned k, unsigned m,
                                    const PadicNumber& theta) {
  validate_shape(p, k, m);
  if (theta.prime() != p) throw PrimeMismatchError("theta prime differs from model prime");
  require_ep(theta);
  return ModelParams(p, k, m, theta, log_p(theta));
}

ModelParams ModelParams::from_theta_rational(uint64_t p, unsigned k, unsigned m,
                                             const mpq_class& theta, int32_t precision) {
  ModelParams out = from_theta(p, k, m, PadicNumber::from_rational(p, theta, precision));
  out.theta_rational_ = theta;
  return out;
}

ModelParams ModelParams::from_coupling(uint64_t p, unsigned k, unsigned m,
                                       const PadicNumber& j) {
  validate_shape(p, k, m);
  if (j.prime() != p) throw PrimeMismatchError("coupling prime differs from model prime");
  if (!domain_flags(j).in_exp_domain) {
    throw DomainError("invalid coupling constant: J outside the exp_p convergence ball");
  }
  PadicNumber theta = exp_p(j);
  return ModelParams(p, k, m, std::move(theta), j);
}

ModelParams ModelParams::from_coupling_rational(uint64_t p, unsigned k, unsigned m,
                                                const mpq_class& j, int32_t precision) {
  ModelParams out = from_coupling(p, k, m, PadicNumber::from_rational(p, j, precision));
  out.coupling_rational_ = j;
  return out;
}

ModelParams ModelParams::with_precision(int32_t precision) const {
  if (precision == this->precision()) return *this;
  if (theta_rational_) {
    return from_theta_rational(p_, k_, m_, *theta_rational_, precision);
  }
  if (coupling_rational_) {
    return from_coupling_rational(p_, k_, m_, *coupling_rational_, precision);
  }
  if (precision < this->precision()) {
    ModelParams out(p_, k_, m_, theta_.truncated(precision), j_.truncated(precision));
    return out;
  }
  throw PrecisionExhaustedError(
      "cannot raise precision: theta was not supplied with rational provenance");
}

}  // namespace psos
