#include "psos/poly.hpp"

#include <algorithm>

#include "psos/errors.hpp"

namespace psos {

PadicPoly::PadicPoly(std::vector<PadicNumber> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("polynomial needs at least one coefficient");
  prime_ = coeffs_.front().prime();
  for (const PadicNumber& c : coeffs_) {
    if (c.prime() != prime_) throw PrimeMismatchError("mixed primes in polynomial coefficients");
  }
}

PadicPoly PadicPoly::from_integers(uint64_t p, const std::vector<mpz_class>& coeffs,
                                   int32_t precision) {
  std::vector<PadicNumber> cs;
  cs.reserve(coeffs.size());
  for (const mpz_class& c : coeffs) cs.push_back(PadicNumber::from_integer(p, c, precision));
  return PadicPoly(std::move(cs));
}

PadicNumber PadicPoly::eval(const PadicNumber& x) const {
  if (x.prime() != prime_) throw PrimeMismatchError("evaluation point prime mismatch");
  PadicNumber acc = coeffs_.back();
  for (size_t j = coeffs_.size() - 1; j-- > 0;) {
    acc = acc * x + coeffs_[j];
  }
  return acc;
}

PadicPoly PadicPoly::derivative() const {
  if (coeffs_.size() == 1) {
    return PadicPoly({PadicNumber::zero(prime_, coeffs_.front().absolute_precision())});
  }
  std::vector<PadicNumber> cs;
  cs.reserve(coeffs_.size() - 1);
  for (size_t j = 1; j < coeffs_.size(); ++j) {
    cs.push_back(coeffs_[j] * static_cast<long>(j));
  }
  return PadicPoly(std::move(cs));
}

namespace {

// Exact integer image of a Z_p value modulo p^c.
mpz_class to_integer_mod(const PadicNumber& x, uint64_t p, int64_t c) {
  if (x.is_zero()) return mpz_class(0);
  mpz_class v = x.unit() * prime_power(p, x.valuation());
  v %= prime_power(p, c);
  return v;
}

mpz_class eval_int(const std::vector<mpz_class>& cs, const mpz_class& x, const mpz_class& mod) {
  mpz_class acc = cs.back();
  for (size_t j = cs.size() - 1; j-- > 0;) {
    acc = (acc * x + cs[j]) % mod;
  }
  if (acc < 0) acc += mod;
  return acc;
}

}  // namespace

PadicNumber hensel_lift(const PadicPoly& f, const PadicNumber& a0, unsigned index,
                        int32_t target_precision) {
  uint64_t p = f.prime();
  if (a0.prime() != p) throw PrimeMismatchError("a0 prime differs from polynomial prime");
  if (target_precision < 1) throw DomainError("target precision must be >= 1");
  if (index > 60) throw DomainError("hensel index too large");
  int64_t i = static_cast<int64_t>(index);

  int64_t avail = INT64_MAX;
  for (const PadicNumber& c : f.coeffs()) {
    if (!c.is_zero() && c.valuation() < 0) {
      throw PreconditionError("polynomial coefficient is not a p-adic integer");
    }
    avail = std::min(avail, c.absolute_precision());
  }
  if (!a0.is_zero() && a0.valuation() < 0) {
    throw PreconditionError("a0 is not a p-adic integer");
  }
  if (a0.absolute_precision() < i + 1) {
    throw PrecisionExhaustedError("a0 carries fewer than index+1 digits");
  }
  int64_t c = std::min<int64_t>(target_precision + i + 4, avail);
  if (c < 2 * i + 1) {
    throw PrecisionExhaustedError("working precision below p^(2*index+1)");
  }
  mpz_class mod = prime_power(p, c);

  std::vector<mpz_class> fi, di;
  fi.reserve(f.coeffs().size());
  for (const PadicNumber& cf : f.coeffs()) fi.push_back(to_integer_mod(cf, p, c));
  for (size_t j = 1; j < fi.size(); ++j) di.push_back((fi[j] * static_cast<long>(j)) % mod);
  if (di.empty()) di.push_back(mpz_class(0));

  mpz_class x = to_integer_mod(a0, p, c);
  mpz_class f0 = eval_int(fi, x, mod);
  if (mpz_divisible_p(f0.get_mpz_t(), prime_power(p, 2 * i + 1).get_mpz_t()) == 0) {
    throw PreconditionError("f(a0) not congruent to 0 mod p^" + std::to_string(2 * i + 1));
  }
  auto derivative_valuation = [&](const mpz_class& at) -> int64_t {
    mpz_class d = eval_int(di, at, mod);
    if (d == 0) {
      throw PrecisionExhaustedError("f'(x) vanishes at working precision");
    }
    return integer_valuation(d, p);
  };
  int64_t vd = derivative_valuation(x);
  if (vd < i) {
    throw PreconditionError("f'(a0) not congruent to 0 mod p^" + std::to_string(i) +
                            " (derivative valuation " + std::to_string(vd) + ")");
  }
  if (vd > i) {
    throw PreconditionError("f'(a0) congruent to 0 mod p^" + std::to_string(i + 1) +
                            " (derivative valuation " + std::to_string(vd) + ")");
  }

  int64_t prev_e = -1;
  for (int iter = 0; iter < 80; ++iter) {
    mpz_class fx = eval_int(fi, x, mod);
    if (fx == 0) break;
    int64_t e = integer_valuation(fx, p);
    if (e >= c) break;
    if (prev_e >= 0 && e <= prev_e) {
      throw NonConvergenceError("hensel iteration stalled at residual valuation " +
                                std::to_string(e));
    }
    prev_e = e;
    mpz_class d = eval_int(di, x, mod);
    int64_t ev = derivative_valuation(x);
    if (ev != i) {
      throw PreconditionError("derivative valuation drifted from index during lifting");
    }
    mpz_class du = d / prime_power(p, ev);
    mpz_class dinv;
    mpz_invert(dinv.get_mpz_t(), du.get_mpz_t(), mod.get_mpz_t());
    mpz_class step = (fx / prime_power(p, ev)) * dinv % mod;
    x = (x - step) % mod;
    if (x < 0) x += mod;
  }

  int64_t known = c - i;  // the root is determined mod p^(c-index)
  mpz_class xk = x % prime_power(p, known);
  if (xk == 0) return PadicNumber::zero(p, known).truncated(target_precision);
  int64_t v = integer_valuation(xk, p);
  PadicNumber root = PadicNumber::from_unit(p, v, xk / prime_power(p, v),
                                            static_cast<int32_t>(known - v));
  return root.truncated(target_precision);
}

}  // namespace psos
