#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace psos {

/// Certified memberships of a value in the standard subsets of Q_p.
/// For a value that is zero at its tracked precision only `in_Zp` and
/// `in_exp_domain` can be certified (from the absolute precision); the
/// flags requiring norm exactly 1 stay false.
struct DomainFlags {
  bool in_Zp = false;         // |x|_p <= 1
  bool in_Zp_star = false;    // |x|_p == 1
  bool in_Ep = false;         // |x|_p == 1 and |x-1|_p <= p^-ep_threshold(p)
  bool in_exp_domain = false; // |x|_p <= p^-ep_threshold(p)
};

/// The integer exponent t realizing the convergence bound p^(-1/(p-1)):
/// norms are integer powers of p, so |x| < p^(-1/(p-1)) means
/// |x| <= p^-t with t = 1 for odd p and t = 2 for p = 2.
constexpr int64_t ep_threshold(uint64_t p) { return p == 2 ? 2 : 1; }

/// An element of Q_p tracked to finite precision.
///
/// Nonzero values are stored in canonical form p^v * u with the unit
/// mantissa u known modulo p^N (0 < u < p^N, p does not divide u); the
/// value is therefore known modulo p^(v+N).  A zero value carries only
/// an absolute precision M: the value is O(p^M).
///
/// Values are immutable after construction; all operations are pure and
/// propagate precision exactly, so instances can be shared freely across
/// threads.
class PadicNumber {
 public:
  // -- construction ----------------------------------------------------
  static PadicNumber zero(uint64_t p, int64_t abs_precision);
  static PadicNumber one(uint64_t p, int32_t precision);
  static PadicNumber from_integer(uint64_t p, const mpz_class& n, int32_t precision);
  static PadicNumber from_integer(uint64_t p, long n, int32_t precision);
  static PadicNumber from_rational(uint64_t p, const mpq_class& q, int32_t precision);
  static PadicNumber from_rational(uint64_t p, const mpz_class& num, const mpz_class& den,
                                   int32_t precision);
  /// Canonical pieces: x = p^val * unit with unit reduced mod p^precision.
  static PadicNumber from_unit(uint64_t p, int64_t val, const mpz_class& unit,
                               int32_t precision);
  /// Accepts "123", "-4/9" and "p^v*u" literals such as "3^-2*5".
  static PadicNumber parse(uint64_t p, std::string_view text, int32_t precision);

  // -- observers -------------------------------------------------------
  uint64_t prime() const { return prime_; }
  bool is_zero() const { return zero_; }
  /// gamma(x); throws PrecisionExhaustedError for a zero value.
  int64_t valuation() const;
  /// Absolute precision M of a zero value; throws for nonzero.
  int64_t zero_precision() const;
  /// Relative precision N (tracked unit digits); 0 for zero values.
  int32_t precision() const { return prec_; }
  /// v + N for nonzero, M for zero: the value is known mod p^(this).
  int64_t absolute_precision() const;
  /// Unit mantissa u; throws for zero values.
  const mpz_class& unit() const;
  /// u mod p^count.
  mpz_class unit_mod(int32_t count) const;
  /// Canonical digits x_0..x_{count-1} of the unit (x_0 > 0).  Throws
  /// PreconditionError when more digits are requested than tracked.
  std::vector<uint32_t> digits(int32_t count) const;

  /// Exponent e with |x|_p = p^e (that is, -valuation).  Throws
  /// PrecisionExhaustedError for a zero value, whose norm is only
  /// bounded, not known.
  int64_t norm_exponent() const { return -valuation(); }
  /// Certified bound: |x|_p <= p^e.  Decidable for every value.
  bool norm_at_most(int64_t e) const;
  bool is_unit() const { return !zero_ && val_ == 0; }

  // -- arithmetic (operands must share the prime) ----------------------
  PadicNumber operator-() const;
  PadicNumber operator+(const PadicNumber& rhs) const;
  PadicNumber operator-(const PadicNumber& rhs) const;
  PadicNumber operator*(const PadicNumber& rhs) const;
  PadicNumber operator/(const PadicNumber& rhs) const;
  PadicNumber operator*(long n) const;
  PadicNumber inverse() const;
  PadicNumber pow(uint64_t e) const;
  /// The same value with at most `precision` tracked unit digits.
  PadicNumber truncated(int32_t precision) const;

  // -- comparison at precision ------------------------------------------
  /// |x - y|_p <= p^(-abs_digits), certified.
  bool agrees_to(const PadicNumber& rhs, int64_t abs_digits) const;
  /// Agreement at the full shared absolute precision.
  bool agrees_with(const PadicNumber& rhs) const;
  /// Mantissa-exact identity (same val, unit, precision and zero state).
  bool identical_to(const PadicNumber& rhs) const;

  std::string to_string(int32_t max_digits = 12) const;

 private:
  PadicNumber(uint64_t p, int64_t val, mpz_class unit, int32_t prec, bool zero,
              int64_t zero_prec);

  uint64_t prime_;
  int64_t val_;       // valuation; 0 for zero values
  mpz_class unit_;    // unit mantissa; 0 for zero values
  int32_t prec_;      // tracked unit digits; 0 for zero values
  bool zero_;
  int64_t zero_prec_; // absolute precision of a zero value
};

PadicNumber operator*(long n, const PadicNumber& x);

/// Memberships computed from valuation and leading digits.
DomainFlags domain_flags(const PadicNumber& x);

/// p^e as an exact big integer (e >= 0); cached per (p, e).
mpz_class prime_power(uint64_t p, int64_t e);

/// Exact p-adic valuation of a nonzero big integer.
int64_t integer_valuation(const mpz_class& n, uint64_t p);

/// Checks p prime (trial division, memoized); throws DomainError otherwise.
void validate_prime(uint64_t p);

}  // namespace psos
