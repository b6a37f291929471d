#include "psos/padic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>

#include "psos/errors.hpp"

namespace psos {

namespace {

bool is_prime_u64(uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (uint64_t d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

void check_same_prime(const PadicNumber& a, const PadicNumber& b) {
  if (a.prime() != b.prime()) {
    throw PrimeMismatchError("operands carry different primes: " + std::to_string(a.prime()) +
                             " vs " + std::to_string(b.prime()));
  }
}

}  // namespace

void validate_prime(uint64_t p) {
  thread_local std::array<uint64_t, 4> known = {0, 0, 0, 0};
  for (uint64_t q : known) {
    if (q == p) return;
  }
  if (p > (uint64_t(1) << 31)) {
    throw DomainError("prime too large (must fit in 31 bits): " + std::to_string(p));
  }
  if (!is_prime_u64(p)) {
    throw DomainError("not a prime: " + std::to_string(p));
  }
  std::rotate(known.begin(), known.begin() + 1, known.end());
  known.back() = p;
}

mpz_class prime_power(uint64_t p, int64_t e) {
  struct Entry {
    uint64_t p = 0;
    int64_t e = -1;
    mpz_class value;
  };
  thread_local std::array<Entry, 8> cache;
  thread_local size_t next = 0;
  if (e < 0) throw DomainError("negative exponent in prime_power");
  for (const Entry& entry : cache) {
    if (entry.p == p && entry.e == e) return entry.value;
  }
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  cache[next] = Entry{p, e, v};
  next = (next + 1) % cache.size();
  return v;
}

int64_t integer_valuation(const mpz_class& n, uint64_t p) {
  if (n == 0) throw DomainError("valuation of integer zero");
  mpz_class reduced;
  mpz_class pz(static_cast<unsigned long>(p));
  return static_cast<int64_t>(mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

PadicNumber::PadicNumber(uint64_t p, int64_t val, mpz_class unit, int32_t prec, bool zero,
                         int64_t zero_prec)
    : prime_(p), val_(val), unit_(std::move(unit)), prec_(prec), zero_(zero),
      zero_prec_(zero_prec) {}

PadicNumber PadicNumber::zero(uint64_t p, int64_t abs_precision) {
  validate_prime(p);
  return PadicNumber(p, 0, mpz_class(0), 0, true, abs_precision);
}

PadicNumber PadicNumber::one(uint64_t p, int32_t precision) {
  validate_prime(p);
  if (precision < 1) throw DomainError("precision must be >= 1");
  return PadicNumber(p, 0, mpz_class(1), precision, false, 0);
}

PadicNumber PadicNumber::from_unit(uint64_t p, int64_t val, const mpz_class& unit,
                                   int32_t precision) {
  validate_prime(p);
  if (precision < 1) throw DomainError("precision must be >= 1");
  mpz_class u = unit % prime_power(p, precision);
  if (u < 0) u += prime_power(p, precision);
  if (u == 0 || mpz_divisible_ui_p(u.get_mpz_t(), static_cast<unsigned long>(p))) {
    throw DomainError("mantissa must be a unit (nonzero, not divisible by p)");
  }
  return PadicNumber(p, val, std::move(u), precision, false, 0);
}

PadicNumber PadicNumber::from_integer(uint64_t p, const mpz_class& n, int32_t precision) {
  validate_prime(p);
  if (precision < 1) throw DomainError("precision must be >= 1");
  if (n == 0) return zero(p, precision);
  int64_t v = integer_valuation(n, p);
  mpz_class u = n / prime_power(p, v);
  mpz_class mod = prime_power(p, precision);
  u %= mod;
  if (u < 0) u += mod;
  return PadicNumber(p, v, std::move(u), precision, false, 0);
}

PadicNumber PadicNumber::from_integer(uint64_t p, long n, int32_t precision) {
  return from_integer(p, mpz_class(n), precision);
}

PadicNumber PadicNumber::from_rational(uint64_t p, const mpz_class& num, const mpz_class& den,
                                       int32_t precision) {
  validate_prime(p);
  if (den == 0) throw DomainError("rational with zero denominator");
  if (precision < 1) throw DomainError("precision must be >= 1");
  if (num == 0) return zero(p, precision);
  int64_t v = integer_valuation(num, p) - integer_valuation(den, p);
  mpz_class un = num / prime_power(p, integer_valuation(num, p));
  mpz_class ud = den / prime_power(p, integer_valuation(den, p));
  mpz_class mod = prime_power(p, precision);
  mpz_class inv;
  if (!mpz_invert(inv.get_mpz_t(), ud.get_mpz_t(), mod.get_mpz_t())) {
    throw DomainError("denominator unit not invertible");  // unreachable for p prime
  }
  mpz_class u = (un * inv) % mod;
  if (u < 0) u += mod;
  return PadicNumber(p, v, std::move(u), precision, false, 0);
}

PadicNumber PadicNumber::from_rational(uint64_t p, const mpq_class& q, int32_t precision) {
  return from_rational(p, q.get_num(), q.get_den(), precision);
}

int64_t PadicNumber::valuation() const {
  if (zero_) {
    throw PrecisionExhaustedError("valuation of a value that is 0 at precision O(p^" +
                                  std::to_string(zero_prec_) + ")");
  }
  return val_;
}

int64_t PadicNumber::zero_precision() const {
  if (!zero_) throw PreconditionError("zero_precision of a nonzero value");
  return zero_prec_;
}

int64_t PadicNumber::absolute_precision() const {
  return zero_ ? zero_prec_ : val_ + prec_;
}

const mpz_class& PadicNumber::unit() const {
  if (zero_) {
    throw PrecisionExhaustedError("unit mantissa of a value that is 0 to precision");
  }
  return unit_;
}

mpz_class PadicNumber::unit_mod(int32_t count) const {
  return unit() % prime_power(prime_, count);
}

std::vector<uint32_t> PadicNumber::digits(int32_t count) const {
  if (count < 0) throw PreconditionError("negative digit count");
  if (count > prec_) {
    throw PreconditionError("requested " + std::to_string(count) + " digits but only " +
                            std::to_string(prec_) + " are tracked");
  }
  std::vector<uint32_t> out;
  out.reserve(static_cast<size_t>(count));
  mpz_class u = unit();
  for (int32_t j = 0; j < count; ++j) {
    out.push_back(static_cast<uint32_t>(
        mpz_fdiv_ui(u.get_mpz_t(), static_cast<unsigned long>(prime_))));
    mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(prime_));
  }
  return out;
}

bool PadicNumber::norm_at_most(int64_t e) const {
  if (zero_) return -zero_prec_ <= e;
  return -val_ <= e;
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  mpz_class mod = prime_power(prime_, prec_);
  return PadicNumber(prime_, val_, mod - unit_, prec_, false, 0);
}

PadicNumber PadicNumber::operator+(const PadicNumber& rhs) const {
  check_same_prime(*this, rhs);
  if (zero_ && rhs.zero_) {
    return zero(prime_, std::min(zero_prec_, rhs.zero_prec_));
  }
  if (zero_ || rhs.zero_) {
    const PadicNumber& z = zero_ ? *this : rhs;
    const PadicNumber& x = zero_ ? rhs : *this;
    int64_t a = std::min(z.zero_prec_, x.val_ + x.prec_);
    if (x.val_ >= a) return zero(prime_, a);
    int32_t prec = static_cast<int32_t>(std::min<int64_t>(x.prec_, a - x.val_));
    return PadicNumber(prime_, x.val_, x.unit_ % prime_power(prime_, prec), prec, false, 0);
  }
  int64_t a = std::min(val_ + prec_, rhs.val_ + rhs.prec_);
  int64_t w = std::min(val_, rhs.val_);
  int64_t span = a - w;  // >= 1 because both relative precisions are >= 1
  mpz_class mod = prime_power(prime_, span);
  mpz_class s = unit_ * prime_power(prime_, val_ - w) + rhs.unit_ * prime_power(prime_, rhs.val_ - w);
  s %= mod;
  if (s < 0) s += mod;
  if (s == 0) return zero(prime_, a);
  int64_t t = integer_valuation(s, prime_);
  mpz_class u = s / prime_power(prime_, t);
  return PadicNumber(prime_, w + t, std::move(u), static_cast<int32_t>(span - t), false, 0);
}

PadicNumber PadicNumber::operator-(const PadicNumber& rhs) const { return *this + (-rhs); }

PadicNumber PadicNumber::operator*(const PadicNumber& rhs) const {
  check_same_prime(*this, rhs);
  if (zero_ && rhs.zero_) return zero(prime_, zero_prec_ + rhs.zero_prec_);
  if (zero_) return zero(prime_, zero_prec_ + rhs.val_);
  if (rhs.zero_) return zero(prime_, rhs.zero_prec_ + val_);
  int32_t prec = std::min(prec_, rhs.prec_);
  mpz_class u = (unit_ * rhs.unit_) % prime_power(prime_, prec);
  return PadicNumber(prime_, val_ + rhs.val_, std::move(u), prec, false, 0);
}

PadicNumber PadicNumber::operator*(long n) const {
  if (n == 0) return zero(prime_, absolute_precision());
  if (zero_) {
    return zero(prime_, zero_prec_ + integer_valuation(mpz_class(n), prime_));
  }
  mpz_class nz(n);
  int64_t v = integer_valuation(nz, prime_);
  mpz_class mod = prime_power(prime_, prec_);
  mpz_class u = (unit_ * (nz / prime_power(prime_, v))) % mod;
  if (u < 0) u += mod;
  return PadicNumber(prime_, val_ + v, std::move(u), prec_, false, 0);
}

PadicNumber operator*(long n, const PadicNumber& x) { return x * n; }

PadicNumber PadicNumber::inverse() const {
  if (zero_) {
    throw DivisionByZeroError("inverse of a value that is 0 at precision O(p^" +
                              std::to_string(zero_prec_) + ")");
  }
  mpz_class mod = prime_power(prime_, prec_);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t());
  return PadicNumber(prime_, -val_, std::move(inv), prec_, false, 0);
}

PadicNumber PadicNumber::operator/(const PadicNumber& rhs) const {
  check_same_prime(*this, rhs);
  if (rhs.zero_) {
    throw DivisionByZeroError("division by a value that is 0 at precision O(p^" +
                              std::to_string(rhs.zero_prec_) + ")");
  }
  if (zero_) return zero(prime_, zero_prec_ - rhs.val_);
  int32_t prec = std::min(prec_, rhs.prec_);
  mpz_class mod = prime_power(prime_, prec);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), rhs.unit_.get_mpz_t(), mod.get_mpz_t());
  mpz_class u = (unit_ * inv) % mod;
  return PadicNumber(prime_, val_ - rhs.val_, std::move(u), prec, false, 0);
}

PadicNumber PadicNumber::pow(uint64_t e) const {
  if (e == 0) return one(prime_, zero_ ? 16 : prec_);
  if (zero_) {
    return zero(prime_, zero_prec_ * static_cast<int64_t>(e));
  }
  mpz_class mod = prime_power(prime_, prec_);
  mpz_class u;
  mpz_class ez(static_cast<unsigned long>(e));
  mpz_powm(u.get_mpz_t(), unit_.get_mpz_t(), ez.get_mpz_t(), mod.get_mpz_t());
  return PadicNumber(prime_, val_ * static_cast<int64_t>(e), std::move(u), prec_, false, 0);
}

PadicNumber PadicNumber::truncated(int32_t precision) const {
  if (precision < 1) throw DomainError("precision must be >= 1");
  if (zero_) return zero(prime_, std::min<int64_t>(zero_prec_, precision));
  if (precision >= prec_) return *this;
  return PadicNumber(prime_, val_, unit_ % prime_power(prime_, precision), precision, false, 0);
}

bool PadicNumber::agrees_to(const PadicNumber& rhs, int64_t abs_digits) const {
  PadicNumber d = *this - rhs;
  return d.norm_at_most(-abs_digits);
}

bool PadicNumber::agrees_with(const PadicNumber& rhs) const {
  return (*this - rhs).is_zero();
}

bool PadicNumber::identical_to(const PadicNumber& rhs) const {
  if (prime_ != rhs.prime_ || zero_ != rhs.zero_) return false;
  if (zero_) return zero_prec_ == rhs.zero_prec_;
  return val_ == rhs.val_ && prec_ == rhs.prec_ && unit_ == rhs.unit_;
}

std::string PadicNumber::to_string(int32_t max_digits) const {
  std::ostringstream os;
  if (zero_) {
    os << "O(" << prime_ << "^" << zero_prec_ << ")";
    return os.str();
  }
  int32_t shown = std::min(max_digits, prec_);
  std::vector<uint32_t> ds = digits(shown);
  if (val_ != 0) os << prime_ << "^" << val_ << "*";
  os << "(";
  bool first = true;
  for (int32_t j = 0; j < shown; ++j) {
    if (ds[static_cast<size_t>(j)] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << ds[static_cast<size_t>(j)];
    if (j == 1) os << "*" << prime_;
    if (j > 1) os << "*" << prime_ << "^" << j;
  }
  if (first) os << "0";
  if (shown < prec_ && unit_ >= prime_power(prime_, shown)) os << " + ...";
  os << " + O(" << prime_ << "^" << prec_ << "))";
  return os.str();
}

DomainFlags domain_flags(const PadicNumber& x) {
  DomainFlags f;
  int64_t t = ep_threshold(x.prime());
  if (x.is_zero()) {
    f.in_Zp = x.zero_precision() >= 0;
    f.in_exp_domain = x.zero_precision() >= t;
    return f;
  }
  int64_t v = x.valuation();
  f.in_Zp = v >= 0;
  f.in_Zp_star = v == 0;
  f.in_exp_domain = v >= t;
  if (f.in_Zp_star) {
    PadicNumber d = x - PadicNumber::one(x.prime(), x.precision());
    f.in_Ep = d.norm_at_most(-t);
  }
  return f;
}

namespace {

mpz_class parse_mpz(std::string_view s) {
  if (s.empty()) throw ParseError("empty integer literal");
  mpz_class v;
  if (mpz_set_str(v.get_mpz_t(), std::string(s).c_str(), 10) != 0) {
    throw ParseError("bad integer literal: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

PadicNumber PadicNumber::parse(uint64_t p, std::string_view text, int32_t precision) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty p-adic literal");
  size_t caret = s.find('^');
  if (caret != std::string::npos) {
    // base^exp or base^exp*unit
    mpz_class base = parse_mpz(s.substr(0, caret));
    size_t star = s.find('*', caret);
    std::string exp_part =
        star == std::string::npos ? s.substr(caret + 1) : s.substr(caret + 1, star - caret - 1);
    mpz_class expz = parse_mpz(exp_part);
    if (base != static_cast<unsigned long>(p)) {
      throw ParseError("power literal base " + base.get_str() + " differs from prime " +
                       std::to_string(p));
    }
    if (!expz.fits_slong_p()) throw ParseError("exponent out of range");
    int64_t e = expz.get_si();
    mpz_class u = star == std::string::npos ? mpz_class(1) : parse_mpz(s.substr(star + 1));
    if (u == 0) return zero(p, precision);
    int64_t uv = integer_valuation(u, p);
    return from_unit(p, e + uv, u / prime_power(p, uv), precision);
  }
  size_t slash = s.find('/');
  if (slash != std::string::npos) {
    mpz_class num = parse_mpz(s.substr(0, slash));
    mpz_class den = parse_mpz(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in rational literal");
    return from_rational(p, num, den, precision);
  }
  return from_integer(p, parse_mpz(s), precision);
}

}  // namespace psos
