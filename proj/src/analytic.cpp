#include "psos/analytic.hpp"

#include <algorithm>

#include "psos/errors.hpp"

namespace psos {

namespace {

// Largest j with p^j <= n.
int64_t floor_log_p(uint64_t n, uint64_t p) {
  int64_t j = 0;
  uint64_t q = p;
  while (q <= n) {
    ++j;
    if (q > n / p) break;
    q *= p;
  }
  return j;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    e >>= 1;
  }
  return r;
}

// Tonelli-Shanks for odd p; returns a root of r^2 = a (mod p), a a QR.
uint64_t sqrt_mod_p(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p % 4 == 3) return powmod_u64(a, (p + 1) / 4, p);
  // write p-1 = q * 2^s
  uint64_t q = p - 1, s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  uint64_t n = 2;
  while (powmod_u64(n, (p - 1) / 2, p) != p - 1) ++n;
  uint64_t c = powmod_u64(n, q, p);
  uint64_t x = powmod_u64(a, (q + 1) / 2, p);
  uint64_t t = powmod_u64(a, q, p);
  uint64_t m = s;
  while (t != 1) {
    uint64_t t2 = t, i = 0;
    while (t2 != 1) {
      t2 = mulmod_u64(t2, t2, p);
      ++i;
    }
    uint64_t b = powmod_u64(c, uint64_t(1) << (m - i - 1), p);
    x = mulmod_u64(x, b, p);
    c = mulmod_u64(b, b, p);
    t = mulmod_u64(t, c, p);
    m = i;
  }
  return x;
}

}  // namespace

PadicNumber exp_p(const PadicNumber& x) {
  uint64_t p = x.prime();
  int64_t t = ep_threshold(p);
  if (!x.norm_at_most(-t)) {
    throw DomainError("exp_p argument outside the convergence ball: |x|_p > p^-" +
                      std::to_string(t));
  }
  if (x.is_zero()) {
    int64_t m = std::min<int64_t>(x.zero_precision(), INT32_MAX);
    return PadicNumber::one(p, static_cast<int32_t>(m));
  }
  int64_t v = x.valuation();
  int64_t target = x.absolute_precision();
  if (target > (int64_t(1) << 22)) {
    throw PrecisionExhaustedError("exp_p target precision too large");
  }
  int32_t work = static_cast<int32_t>(target);
  PadicNumber sum = PadicNumber::one(p, work);
  PadicNumber term = PadicNumber::one(p, work);
  // term lower bound: val(x^n/n!) >= n*v - floor((n-1)/(p-1))
  for (long n = 1;; ++n) {
    int64_t bound = n * v - (n - 1) / static_cast<int64_t>(p - 1);
    if (bound >= target) break;
    term = term * x / PadicNumber::from_integer(p, n, work);
    sum = sum + term;
  }
  return sum;
}

PadicNumber log_p(const PadicNumber& x) {
  uint64_t p = x.prime();
  PadicNumber h = x - PadicNumber::one(p, x.is_zero() ? 16 : std::max<int32_t>(x.precision(), 1));
  if (h.is_zero()) {
    return PadicNumber::zero(p, h.zero_precision());
  }
  if (!h.norm_at_most(-1)) {
    throw DomainError("log_p argument outside B(1,1): |x-1|_p >= 1");
  }
  int64_t v = h.valuation();
  int64_t target = h.absolute_precision();
  PadicNumber sum = PadicNumber::zero(p, target);
  PadicNumber power = h;  // h^n
  for (long n = 1;; ++n) {
    int64_t bound = n * v - floor_log_p(static_cast<uint64_t>(n), p);
    if (bound >= target) break;
    PadicNumber term = power / PadicNumber::from_integer(p, n, static_cast<int32_t>(target));
    sum = (n % 2 == 1) ? sum + term : sum - term;
    power = power * h;
  }
  return sum;
}

SqrtWitness sqrt_exists(const PadicNumber& a) {
  if (a.is_zero()) {
    throw PreconditionError("square-root test requires a nonzero value");
  }
  uint64_t p = a.prime();
  if (a.valuation() % 2 != 0) {
    return SqrtWitness{false, 0, "valuation is odd"};
  }
  if (p == 2) {
    if (a.precision() < 3) {
      throw PrecisionExhaustedError("need at least 3 tracked digits to decide a 2-adic square");
    }
    unsigned long u8 = mpz_fdiv_ui(a.unit().get_mpz_t(), 8);
    if (u8 != 1) {
      return SqrtWitness{false, 0, "unit is not 1 mod 8 (digits a_1, a_2 not both 0)"};
    }
    return SqrtWitness{true, 1, ""};
  }
  uint64_t a0 = mpz_fdiv_ui(a.unit().get_mpz_t(), static_cast<unsigned long>(p));
  if (powmod_u64(a0, (p - 1) / 2, p) != 1) {
    return SqrtWitness{false, 0, "leading digit is not a quadratic residue mod p"};
  }
  uint64_t r = sqrt_mod_p(a0, p);
  r = std::min(r, p - r);
  return SqrtWitness{true, r, ""};
}

PadicNumber sqrt(const PadicNumber& a) {
  SqrtWitness w = sqrt_exists(a);
  if (!w.exists) {
    throw DomainError(std::string("no square root in Q_p: ") + w.reason);
  }
  uint64_t p = a.prime();
  int64_t v = a.valuation();
  int32_t n = a.precision();
  if (p != 2) {
    mpz_class mod = prime_power(p, n);
    const mpz_class& u = a.unit();
    mpz_class x(static_cast<unsigned long>(w.residue));
    for (int iter = 0; iter < 64; ++iter) {
      mpz_class fx = (x * x - u) % mod;
      if (fx < 0) fx += mod;
      if (fx == 0) break;
      mpz_class d = (2 * x) % mod;
      mpz_class dinv;
      mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t());
      x = (x - fx * dinv) % mod;
      if (x < 0) x += mod;
    }
    return PadicNumber::from_unit(p, v / 2, x, n);
  }
  // p = 2: lift bit by bit; the root is determined mod 2^(n-1).
  mpz_class u = a.unit();
  mpz_class x(1);
  for (int32_t j = 3; j < n; ++j) {
    mpz_class mod = prime_power(2, j + 1);
    mpz_class r = (x * x - u) % mod;
    if (r < 0) r += mod;
    if (r != 0) x += prime_power(2, j - 1);
  }
  int32_t out_prec = n - 1;
  mpz_class mod_out = prime_power(2, out_prec);
  x %= mod_out;
  if (mpz_fdiv_ui(x.get_mpz_t(), 4) == 3 && out_prec >= 2) {
    x = mod_out - x;
  }
  return PadicNumber::from_unit(2, v / 2, x, out_prec);
}

}  // namespace psos
