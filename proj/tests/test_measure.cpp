#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "psos/errors.hpp"
#include "psos/measure.hpp"
#include "support.hpp"

using namespace psos;
using testsupport::Rng;

namespace {

BoundaryField ones_field(uint64_t p, unsigned m, int32_t prec) {
  std::vector<PadicNumber> z(m + 1, PadicNumber::one(p, prec));
  return BoundaryField::translation_invariant(std::move(z));
}

BoundaryField theta28_field(int32_t prec) {
  ModelParams params = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), prec);
  Z0BranchResult res = solve_z0_equal_1_branch(params);
  for (const BoundaryField& f : res.solutions) {
    // the solution built on the root x = 1 (mod 9): z_1 = x^2 = 10 (mod 27)
    if (f.ti_values()[1].unit_mod(3) == 10) return f;
  }
  REQUIRE(false);
  return res.solutions.front();
}

}  // namespace

TEST_CASE("partition function of the two-state example is 250") {
  ModelParams params = ModelParams::from_theta_rational(3, 2, 1, mpq_class(4), 48);
  TreeVolume vol(2, 1);
  BoundaryField field = ones_field(3, 1, 48);
  PadicNumber z1 = partition_function(field, vol, params);
  CHECK(z1.agrees_with(PadicNumber::from_integer(3, 250, 48)));
  CHECK(z1.norm_exponent() == 0);

  MeasureTable table = measure_table(field, vol, params);
  REQUIRE(table.mu.size() == 16);
  // constant-0 configuration is the first in enumeration order
  CHECK(table.mu[0].agrees_with(PadicNumber::from_rational(3, 1, 250, 48)));
  CHECK(table.mu[0].norm_exponent() == 0);

  SpinConfiguration zero_cfg{Region::ball, 1, {0, 0, 0, 0}};
  CHECK(mu_n(field, vol, zero_cfg, params).agrees_with(table.mu[0]));
}

TEST_CASE("measures are normalized at working precision") {
  struct Case {
    uint64_t p;
    unsigned k, m;
    long theta;
    unsigned n;
  };
  for (const Case& c : {Case{3, 2, 1, 4, 1}, Case{3, 2, 1, 4, 2}, Case{5, 2, 2, 6, 1}}) {
    ModelParams params = ModelParams::from_theta_rational(c.p, c.k, c.m, mpq_class(c.theta), 48);
    BoundaryField field = ones_field(c.p, c.m, 48);
    TreeVolume vol(c.k, c.n);
    MeasureTable table = measure_table(field, vol, params);
    PadicNumber sum = PadicNumber::zero(c.p, 48);
    for (const PadicNumber& mu : table.mu) sum = sum + mu;
    REQUIRE((sum - PadicNumber::one(c.p, 48)).norm_at_most(-40));
  }
  // p | m+1: normalization still holds once the precision absorbs v(Z)
  ModelParams params = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 80);
  BoundaryField field = theta28_field(80);
  TreeVolume vol(2, 1);
  MeasureTable table = measure_table(field, vol, params);
  PadicNumber sum = PadicNumber::zero(3, 80);
  for (const PadicNumber& mu : table.mu) sum = sum + mu;
  REQUIRE((sum - PadicNumber::one(3, 80)).norm_at_most(-56));
}

TEST_CASE("a unit rescaling at one leaf leaves the measure unchanged") {
  ModelParams params = ModelParams::from_theta_rational(5, 2, 2, mpq_class(6), 40);
  TreeVolume vol(2, 1);
  BoundaryField ti = ones_field(5, 2, 40);
  MeasureTable base = measure_table(ti, vol, params);

  // an independent unit at every leaf must cancel between the weight
  // and the partition function
  Rng rng(31);
  std::vector<std::vector<PadicNumber>> values;
  for (std::size_t v = 0; v < vol.vertex_count(); ++v) {
    std::vector<PadicNumber> z = ti.ti_values();
    if (vol.successors(v).empty()) {
      PadicNumber lambda = rng.unit(5, 40);
      for (PadicNumber& c : z) c = c * lambda;
    }
    values.push_back(std::move(z));
  }
  BoundaryField scaled = BoundaryField::per_vertex(std::move(values), FieldCheck::units_only);
  MeasureTable other = measure_table(scaled, vol, params);
  REQUIRE(other.mu.size() == base.mu.size());
  for (size_t i = 0; i < base.mu.size(); ++i) {
    REQUIRE(other.mu[i].agrees_with(base.mu[i]));
  }
}

TEST_CASE("partition norms follow the divisibility dichotomy") {
  Rng rng(17);
  // p does not divide m+1: Z_n is a unit
  for (int iter = 0; iter < 5; ++iter) {
    ModelParams params = ModelParams::from_theta(5, 2, 2, rng.in_ep(5, 40));
    BoundaryField field = solve_ti_unique(params);
    PadicNumber z = partition_function(field, TreeVolume(2, 1), params);
    REQUIRE(z.norm_exponent() == 0);
  }
  // p | m+1 at theta = 28: v(Z_1) = 4 and v(Z_2) = 10 for this field
  ModelParams params = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 64);
  BoundaryField field = theta28_field(64);
  PadicNumber z1 = partition_function(field, TreeVolume(2, 1), params);
  CHECK(z1.valuation() == 4);
  PadicNumber z2 = partition_function(field, TreeVolume(2, 2), params);
  CHECK(z2.valuation() == 10);
}

TEST_CASE("a-factors and the partition recurrence") {
  ModelParams ising = ModelParams::from_theta_rational(3, 2, 1, mpq_class(4), 48);
  TreeVolume vol(2, 2);
  BoundaryField field = ones_field(3, 1, 48);
  PadicNumber a1 = a_factor(field, vol, 1, ising);
  CHECK(a1.agrees_with(PadicNumber::from_integer(3, 25, 48)));  // (4+1)^2
  CHECK(a1.norm_exponent() == 0);
  PadicNumber a_root = a_factor(field, vol, 0, ising);
  CHECK(a_root.agrees_with(PadicNumber::from_integer(3, 125, 48)));
  CHECK_THROWS_AS(a_factor(field, vol, 9, ising), PreconditionError);  // leaf

  // p | m+1: each factor of a(x) is divisible by p, so v(a) >= k
  Rng rng(23);
  ModelParams p3 = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 48);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<PadicNumber> z = rng.ep_vector(3, 48, 3, true);
    BoundaryField f = BoundaryField::translation_invariant(std::move(z));
    PadicNumber a = a_factor(f, vol, 1, p3);
    REQUIRE(a.norm_at_most(-2));
  }

  // Z_n = A_{n-1} Z_{n-1} with A_{n-1} the product of a(y) over W_{n-1},
  // at n = 1 (root factor against the derived mu^(0)) and n = 2
  for (const ModelParams& params : {ising, p3}) {
    BoundaryField f = params.prime_divides_spin_count() ? theta28_field(48)
                                                        : ones_field(3, 1, 48);
    PadicNumber z0 = partition_function(f, TreeVolume(2, 0), params);
    PadicNumber z1 = partition_function(f, TreeVolume(2, 1), params);
    PadicNumber z2 = partition_function(f, TreeVolume(2, 2), params);
    REQUIRE((z1 - a_factor(f, vol, 0, params) * z0).norm_at_most(-36));
    PadicNumber big_a = PadicNumber::one(3, 48);
    for (std::size_t y = vol.level_begin(1); y < vol.ball_size(1); ++y) {
      big_a = big_a * a_factor(f, vol, y, params);
    }
    REQUIRE((z2 - big_a * z1).norm_at_most(-36));
  }
}

TEST_CASE("compatibility holds for solutions and fails for random fields") {
  // two-state model, all-ones law
  ModelParams ising = ModelParams::from_theta_rational(3, 2, 1, mpq_class(4), 64);
  BoundaryField ones = ones_field(3, 1, 64);
  CompatibilityReport r1 = check_compatibility(ones, ising, 1);
  CHECK(r1.pass);
  CHECK(r1.max_residual_exp <= -56);

  // three-state model at theta = 28, lifted precision absorbs v(Z_n)
  ModelParams p3 = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 104);
  BoundaryField sol = theta28_field(104);
  CompatibilityReport r2 = check_compatibility(sol, p3, 1, default_enumeration_cap,
                                               verify_slack, 64);
  CHECK(r2.pass);
  CHECK(r2.max_residual_exp <= -56);

  // at n = 1 the marginal identity holds for any field by construction
  // of mu^(0); n = 2 is where the system is actually tested
  Rng rng(47);
  int failures = 0;
  for (int iter = 0; iter < 6; ++iter) {
    std::vector<PadicNumber> z = rng.ep_vector(5, 48, 3, true);
    BoundaryField f = BoundaryField::translation_invariant(std::move(z));
    ModelParams params = ModelParams::from_theta_rational(5, 2, 2, mpq_class(6), 48);
    CHECK(check_compatibility(f, params, 1).pass);
    CompatibilityReport r = check_compatibility(f, params, 2);
    if (!r.pass) {
      ++failures;
      REQUIRE(r.max_residual_exp >= -3);
    }
  }
  CHECK(failures == 6);
}

TEST_CASE("boundedness classification") {
  BoundednessReport bounded =
      classify_boundedness(ModelParams::from_theta_rational(3, 2, 1, mpq_class(4), 48));
  CHECK(bounded.bounded);
  REQUIRE(bounded.levels.size() == 2);
  for (const BoundednessLevelData& level : bounded.levels) {
    CHECK(level.partition_valuation == 0);
    CHECK(level.mu_norm_exp_min == 0);
    CHECK(level.mu_norm_exp_max == 0);
  }

  BoundednessReport unbounded =
      classify_boundedness(ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 64));
  CHECK(!unbounded.bounded);
  REQUIRE(unbounded.has_field);
  REQUIRE(!unbounded.levels.empty());
  CHECK(unbounded.levels[0].partition_valuation >= 2);
  CHECK(unbounded.levels[0].mu_norm_exp_min >= 2);  // |mu| >= 3^2 = p^(k|V_0|)

  BoundednessReport no_field =
      classify_boundedness(ModelParams::from_theta_rational(5, 2, 4, mpq_class(6), 32));
  CHECK(!no_field.bounded);  // 5 | 5
  CHECK(!no_field.has_field);
}

TEST_CASE("caps guard the enumeration") {
  ModelParams params = ModelParams::from_theta_rational(3, 3, 2, mpq_class(28), 32);
  BoundaryField field = ones_field(3, 2, 32);
  CHECK_THROWS_AS(partition_function(field, TreeVolume(3, 3), params, 1000), CapExceededError);
}

TEST_CASE("summation order does not change exact results") {
  // order-independence is what allows chunked parallel reductions
  ModelParams params = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 64);
  BoundaryField field = theta28_field(64);
  TreeVolume vol(2, 1);
  MeasureTable table = measure_table(field, vol, params);
  PadicNumber forward = PadicNumber::zero(3, 64);
  for (const PadicNumber& mu : table.mu) forward = forward + mu;
  PadicNumber backward = PadicNumber::zero(3, 64);
  for (auto it = table.mu.rbegin(); it != table.mu.rend(); ++it) backward = backward + *it;
  CHECK(forward.identical_to(backward));
}

TEST_CASE("model parameters re-embed at other precisions") {
  ModelParams params = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 32);
  ModelParams up = params.with_precision(96);
  CHECK(up.precision() == 96);
  CHECK(up.theta().truncated(32).identical_to(params.theta()));
  ModelParams down = up.with_precision(16);
  CHECK(down.theta().identical_to(params.theta().truncated(16)));

  // without rational provenance a raise is impossible
  ModelParams direct = ModelParams::from_theta(3, 2, 2, PadicNumber::from_integer(3, 28, 32));
  CHECK_THROWS_AS(direct.with_precision(64), PrecisionExhaustedError);
  CHECK(direct.with_precision(16).precision() == 16);
}

TEST_CASE("a partition function below the working precision is an error, not a zero") {
  // v(Z_1) = 4 at theta = 28, so 3 tracked digits cannot see Z_1
  ModelParams params = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 3);
  BoundaryField field = theta28_field(64);
  CHECK_THROWS_AS(measure_table(field, TreeVolume(2, 1), params), PrecisionExhaustedError);
}
