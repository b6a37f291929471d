#include "psos/measure.hpp"

#include <algorithm>

#include "psos/errors.hpp"

namespace psos {

namespace {

int64_t bound_exp(const PadicNumber& x) {
  return x.is_zero() ? -x.zero_precision() : -x.valuation();
}

// theta^0 .. theta^top
std::vector<PadicNumber> power_table(const PadicNumber& theta, long top) {
  std::vector<PadicNumber> pw;
  pw.reserve(static_cast<size_t>(top) + 1);
  pw.push_back(PadicNumber::one(theta.prime(), theta.precision()));
  for (long e = 1; e <= top; ++e) pw.push_back(pw.back() * theta);
  return pw;
}

// Unnormalized weight theta^{W(sigma)} prod_{x in W_n} z_{sigma(x),x}.
PadicNumber config_weight(const BoundaryField& field, const TreeVolume& vol,
                          const SpinConfiguration& sigma,
                          const std::vector<PadicNumber>& theta_pow) {
  long w = hamiltonian_weight(vol, sigma);
  PadicNumber acc = theta_pow[static_cast<size_t>(w)];
  std::size_t begin = vol.level_begin(vol.radius());
  for (std::size_t x = begin; x < vol.vertex_count(); ++x) {
    acc = acc * field.at(x)[sigma.spins[x]];
  }
  return acc;
}

void check_field_shape(const BoundaryField& field, const TreeVolume& vol,
                       const ModelParams& params) {
  if (field.prime() != params.prime()) {
    throw PrimeMismatchError("field prime differs from model prime");
  }
  if (field.spin_count() != params.spin_count()) {
    throw PreconditionError("field vector length does not match m+1");
  }
  if (!field.is_translation_invariant() && field.vertex_count() < vol.vertex_count()) {
    throw PreconditionError("per-vertex field does not cover the volume");
  }
}

long max_weight(const TreeVolume& vol, const ModelParams& params) {
  return static_cast<long>(params.spin_max()) *
         static_cast<long>(vol.vertex_count() > 0 ? vol.vertex_count() - 1 : 0);
}

// The field value the boundary-law system assigns at the root, which
// has k+1 successors: z_{i,root} = prod_{y in S(root)} F_i(z_y), with
// the literal (possibly unnormalized) vectors at the level-1 vertices.
// This is what makes the level-0 distribution compatible with mu^(1)
// and the recurrence Z_1 = a(root) Z_0 exact.
std::vector<PadicNumber> derived_root_law(const BoundaryField& field,
                                          const ModelParams& params) {
  unsigned m = params.spin_max();
  unsigned fanout = params.order() + 1;
  if (!field.is_translation_invariant() && field.vertex_count() < 1 + fanout) {
    throw PreconditionError(
        "per-vertex field must cover V_1 to derive the root law for mu^(0)");
  }
  std::vector<PadicNumber> theta_pow;
  theta_pow.reserve(m + 1);
  theta_pow.push_back(PadicNumber::one(params.prime(), params.precision()));
  for (unsigned e = 1; e <= m; ++e) theta_pow.push_back(theta_pow.back() * params.theta());

  std::vector<PadicNumber> law;
  law.reserve(m + 1);
  for (unsigned i = 0; i <= m; ++i) {
    PadicNumber acc = PadicNumber::one(params.prime(), params.precision());
    for (unsigned y = 1; y <= fanout; ++y) {
      const std::vector<PadicNumber>& zy = field.at(y);
      PadicNumber num = theta_pow[i > 0 ? i : 0] * zy[0];
      PadicNumber den = theta_pow[m] * zy[0];
      for (unsigned j = 1; j <= m; ++j) {
        unsigned d = i > j ? i - j : j - i;
        num = num + theta_pow[d] * zy[j];
        den = den + theta_pow[m - j] * zy[j];
      }
      if (den.is_zero()) {
        throw PrecisionExhaustedError("root-law denominator vanishes at working precision");
      }
      acc = acc * (num / den);
    }
    law.push_back(std::move(acc));
  }
  return law;
}

}  // namespace

namespace {

// All configuration weights in enumeration order.  For the radius-0
// ball the weights are the derived root law (boundary laws carry no
// value at the root).
std::vector<PadicNumber> all_weights(const BoundaryField& field, const TreeVolume& vol,
                                     const ModelParams& params, uint64_t cap) {
  check_field_shape(field, vol, params);
  if (vol.radius() == 0) {
    return derived_root_law(field, params);
  }
  std::vector<PadicNumber> theta_pow = power_table(params.theta(), max_weight(vol, params));
  ConfigEnumerator en(vol, params.spin_max(), Region::ball, vol.radius(), cap);
  std::vector<PadicNumber> weights;
  weights.reserve(en.total());
  for (; en.valid(); en.advance()) {
    weights.push_back(config_weight(field, vol, en.config(), theta_pow));
  }
  return weights;
}

}  // namespace

PadicNumber partition_function(const BoundaryField& field, const TreeVolume& vol,
                               const ModelParams& params, uint64_t cap) {
  PadicNumber z = PadicNumber::zero(params.prime(), params.precision());
  for (const PadicNumber& w : all_weights(field, vol, params, cap)) z = z + w;
  return z;
}

MeasureTable measure_table(const BoundaryField& field, const TreeVolume& vol,
                           const ModelParams& params, uint64_t cap) {
  std::vector<PadicNumber> weights = all_weights(field, vol, params, cap);
  PadicNumber z = PadicNumber::zero(params.prime(), params.precision());
  for (const PadicNumber& w : weights) z = z + w;
  if (z.is_zero()) {
    throw PrecisionExhaustedError(
        "partition function vanishes at working precision; raise the precision");
  }
  MeasureTable table;
  table.level = vol.radius();
  table.partition = z;
  table.mu.reserve(weights.size());
  for (PadicNumber& w : weights) table.mu.push_back(w / z);
  return table;
}

PadicNumber mu_n(const BoundaryField& field, const TreeVolume& vol,
                 const SpinConfiguration& sigma, const ModelParams& params, uint64_t cap) {
  check_field_shape(field, vol, params);
  if (sigma.region != Region::ball || sigma.level != vol.radius() ||
      sigma.spins.size() != vol.vertex_count()) {
    throw PreconditionError("configuration must cover the whole ball V_n");
  }
  MeasureTable table = measure_table(field, vol, params, cap);
  uint64_t rank = 0;
  for (uint8_t spin : sigma.spins) {
    rank = rank * params.spin_count() + spin;
  }
  return table.mu.at(rank);
}

PadicNumber a_factor(const BoundaryField& field, const TreeVolume& vol, std::size_t vertex,
                     const ModelParams& params) {
  check_field_shape(field, vol, params);
  std::span<const std::size_t> succ = vol.successors(vertex);
  if (succ.empty()) {
    throw PreconditionError("a(x) needs a non-leaf vertex");
  }
  PadicNumber acc = PadicNumber::one(params.prime(), params.precision());
  for (std::size_t y : succ) {
    acc = acc * rhs_denominator(field.at(y), params);
  }
  return acc;
}

CompatibilityReport check_compatibility(const BoundaryField& field, const ModelParams& params,
                                        unsigned n, uint64_t cap, int64_t slack,
                                        int32_t target_precision) {
  if (n < 1) throw PreconditionError("compatibility check needs n >= 1");
  TreeVolume vol(params.order(), n);
  TreeVolume prev(params.order(), n - 1);
  MeasureTable table_n = measure_table(field, vol, params, cap);
  MeasureTable table_prev = measure_table(field, prev, params, cap);

  // V_{n-1} ids are a prefix of V_n's, so the enumeration of Omega_{V_n}
  // visits each Omega_{V_{n-1}} configuration as a contiguous block of
  // (m+1)^{|W_n|} extensions.
  uint64_t block = 1;
  for (std::size_t i = 0; i < vol.level_size(n); ++i) block *= params.spin_count();

  CompatibilityReport report;
  int32_t base = target_precision > 0
                     ? target_precision
                     : std::min<int32_t>(params.precision(), field.precision());
  report.threshold_exp = -(base - slack);
  for (uint64_t prefix = 0; prefix < table_prev.mu.size(); ++prefix) {
    PadicNumber sum = PadicNumber::zero(params.prime(), params.precision());
    for (uint64_t ext = 0; ext < block; ++ext) {
      sum = sum + table_n.mu[prefix * block + ext];
    }
    PadicNumber residual = sum - table_prev.mu[prefix];
    report.max_residual_exp = std::max(report.max_residual_exp, bound_exp(residual));
  }
  report.pass = report.max_residual_exp <= report.threshold_exp;
  return report;
}

BoundednessReport classify_boundedness(const ModelParams& params,
                                       const std::optional<BoundaryField>& supplied,
                                       unsigned max_level, uint64_t cap) {
  BoundednessReport report;
  report.p = params.prime();
  report.k = params.order();
  report.m = params.spin_max();
  report.bounded = !params.prime_divides_spin_count();

  std::optional<BoundaryField> field = supplied;
  if (!field) {
    if (report.bounded) {
      field = solve_ti_unique(params);
      report.notes.push_back("field: translation-invariant contraction fixed point");
    } else if (params.spin_max() == 2) {
      Z0BranchResult z0 = solve_z0_equal_1_branch(params);
      if (!z0.solutions.empty()) {
        field = z0.solutions.front();
        report.notes.push_back("field: first z0=1 branch solution");
      } else if (params.order() == 2 && params.prime() != 2) {
        QuarticBranchResult quartic = solve_three_state_k2_p3(params);
        if (!quartic.solutions.empty()) {
          field = quartic.solutions.front().field;
          report.notes.push_back("field: first z0!=1 branch solution");
        }
      }
    }
  }
  report.has_field = field.has_value();
  if (!field) {
    report.notes.push_back("no boundary law available; reporting the divisibility class only");
    return report;
  }

  for (unsigned n = 1; n <= max_level; ++n) {
    TreeVolume vol(params.order(), n);
    MeasureTable table = measure_table(*field, vol, params, cap);
    BoundednessLevelData data;
    data.n = n;
    data.partition_valuation = table.partition->valuation();
    data.mu_norm_exp_min = INT64_MAX;
    data.mu_norm_exp_max = INT64_MIN;
    for (const PadicNumber& mu : table.mu) {
      int64_t e = -mu.valuation();
      data.mu_norm_exp_min = std::min(data.mu_norm_exp_min, e);
      data.mu_norm_exp_max = std::max(data.mu_norm_exp_max, e);
    }
    data.a_root_valuation = a_factor(*field, vol, 0, params).valuation();
    if (n >= 2) {
      data.a_internal_valuation = a_factor(*field, vol, 1, params).valuation();
    }
    int64_t big_a = 0;
    for (std::size_t y = vol.level_begin(n - 1); y < vol.ball_size(n - 1); ++y) {
      big_a += a_factor(*field, vol, y, params).valuation();
    }
    data.big_a_valuation = big_a;
    data.reference_bound_exp =
        static_cast<uint64_t>(params.order()) * static_cast<uint64_t>(vol.ball_size(n - 1));
    report.levels.push_back(data);
  }
  return report;
}

}  // namespace psos
