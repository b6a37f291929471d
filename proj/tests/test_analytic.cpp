#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psos/analytic.hpp"
#include "psos/errors.hpp"
#include "support.hpp"

using namespace psos;
using testsupport::Rng;

TEST_CASE("exp_p at zero and at 3") {
  PadicNumber e0 = exp_p(PadicNumber::zero(3, 8));
  CHECK(e0.agrees_with(PadicNumber::one(3, 8)));

  // independent oracle: exact rational partial sums of the series
  mpq_class sum = 0;
  mpz_class fact = 1;
  for (int n = 0; n <= 10; ++n) {
    if (n > 0) fact *= n;
    mpz_class num;
    mpz_ui_pow_ui(num.get_mpz_t(), 3, static_cast<unsigned long>(n));
    sum += mpq_class(num, fact);
  }
  sum.canonicalize();
  PadicNumber expected = PadicNumber::from_rational(3, sum, 4);
  PadicNumber e3 = exp_p(PadicNumber::from_integer(3, 3, 3));
  CHECK(e3.agrees_with(expected));
  CHECK(e3.unit_mod(3) == 13);  // exp_3(3) = 13 (mod 27)
}

TEST_CASE("exp_p rejects arguments outside the convergence ball") {
  CHECK_THROWS_AS(exp_p(PadicNumber::from_integer(2, 2, 8)), DomainError);  // |2|_2 = 2^-1
  CHECK_THROWS_AS(exp_p(PadicNumber::from_integer(3, 2, 8)), DomainError);
  CHECK_NOTHROW(exp_p(PadicNumber::from_integer(2, 4, 8)));
}

TEST_CASE("log_p basics") {
  PadicNumber l1 = log_p(PadicNumber::one(3, 8));
  CHECK(l1.is_zero());
  CHECK(log_p(PadicNumber::from_integer(3, 4, 10)).norm_exponent() == -1);  // |log 4|_3 = |3|_3
  CHECK_THROWS_AS(log_p(PadicNumber::from_integer(3, 5, 8)), DomainError);  // |5-1|_3 = 1
}

TEST_CASE("exp/log identities on random arguments") {
  Rng rng(123);
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
    for (int iter = 0; iter < 300; ++iter) {
      PadicNumber x = rng.exp_domain(p, 20);
      PadicNumber ex = exp_p(x);
      REQUIRE(ex.norm_exponent() == 0);
      PadicNumber em1 = ex - PadicNumber::one(p, 20);
      if (x.is_zero()) {
        REQUIRE(em1.norm_at_most(-x.zero_precision()));
      } else {
        REQUIRE(em1.norm_exponent() == x.norm_exponent());
      }
      REQUIRE(log_p(ex).agrees_with(x));
      PadicNumber h = x;
      PadicNumber oneph = PadicNumber::one(p, 20) + h;
      REQUIRE(exp_p(log_p(oneph)).agrees_with(oneph));
      REQUIRE(domain_flags(ex).in_Ep);
    }
  }
}

TEST_CASE("products of E_p members stay in E_p") {
  Rng rng(321);
  for (uint64_t p : {2ull, 3ull, 7ull}) {
    for (int iter = 0; iter < 300; ++iter) {
      size_t len = 2 + rng.below(6);
      PadicNumber prod = PadicNumber::one(p, 16);
      for (size_t i = 0; i < len; ++i) prod = prod * rng.in_ep(p, 16);
      REQUIRE(domain_flags(prod).in_Ep);
    }
  }
}

TEST_CASE("square-root existence criterion") {
  SqrtWitness w7 = sqrt_exists(PadicNumber::from_integer(3, 7, 8));
  CHECK(w7.exists);
  CHECK(w7.residue == 1);  // smallest root of r^2 = 1 (mod 3)
  CHECK(!sqrt_exists(PadicNumber::from_integer(3, 3, 8)).exists);  // odd valuation
  CHECK(!sqrt_exists(PadicNumber::from_integer(3, 2, 8)).exists);  // 2 not a square mod 3
  CHECK_THROWS_AS(sqrt_exists(PadicNumber::zero(3, 8)), PreconditionError);
  // p = 2: unit must be 1 mod 8
  CHECK(sqrt_exists(PadicNumber::from_integer(2, 17, 8)).exists);
  CHECK(!sqrt_exists(PadicNumber::from_integer(2, 3, 8)).exists);
  CHECK(!sqrt_exists(PadicNumber::from_integer(2, 5, 8)).exists);
  CHECK(!sqrt_exists(PadicNumber::from_integer(2, 8, 8)).exists);
  CHECK(sqrt_exists(PadicNumber::from_integer(2, 4, 8)).exists);
}

TEST_CASE("sqrt produces the witness root") {
  PadicNumber r = sqrt(PadicNumber::from_integer(3, 7, 8));
  CHECK(r.unit_mod(2) == 4);  // root = 4 (mod 9)
  auto d = r.digits(2);
  CHECK(d[0] == 1);
  CHECK(d[1] == 1);
  CHECK((r * r).agrees_with(PadicNumber::from_integer(3, 7, 8)));

  CHECK(sqrt(PadicNumber::one(5, 8)).agrees_with(PadicNumber::one(5, 8)));
  CHECK_THROWS_AS(sqrt(PadicNumber::from_integer(3, 2, 8)), DomainError);
}

TEST_CASE("sqrt squares back on random inputs, all parities of storage") {
  Rng rng(55);
  for (uint64_t p : {2ull, 3ull, 5ull, 11ull}) {
    int found = 0;
    for (int iter = 0; iter < 400 && found < 100; ++iter) {
      PadicNumber a = rng.nonzero(p, 20, -2, 3);
      SqrtWitness w = sqrt_exists(a);
      if (!w.exists) continue;
      ++found;
      PadicNumber r = sqrt(a);
      REQUIRE((r * r).agrees_with(a.truncated(r.precision())));
      if (p != 2) {
        REQUIRE(r.digits(1)[0] == w.residue);
      }
    }
    REQUIRE(found > 0);
  }
}

TEST_CASE("sqrt matches exhaustive unit search at small modulus") {
  // independent oracle: valuation even and the unit a square mod p^6
  Rng rng(99);
  for (uint64_t p : {2ull, 3ull, 5ull}) {
    uint64_t mod = 1;
    for (int i = 0; i < 6; ++i) mod *= p;
    for (int iter = 0; iter < 200; ++iter) {
      PadicNumber a = rng.nonzero(p, 12, -4, 4);
      bool expect = false;
      if (a.valuation() % 2 == 0) {
        uint64_t target = mpz_fdiv_ui(a.unit().get_mpz_t(), mod);
        for (uint64_t w = 0; w < mod && !expect; ++w) {
          expect = (w * w) % mod == target;
        }
      }
      REQUIRE(sqrt_exists(a).exists == expect);
    }
  }
}
