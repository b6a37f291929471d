#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "psos/field.hpp"
#include "psos/gibbs.hpp"
#include "psos/model.hpp"
#include "psos/tree.hpp"

namespace psos {

/// Finite-volume distribution on Omega_{V_n}: mu(sigma) =
/// theta^{W(sigma)} prod_{x in W_n} z_{sigma(x),x} / Z_n, with W the
/// integer interaction weight (exp_p(H_n) = theta^W exactly, since H_n
/// is an integer multiple of J).  Entries are indexed by the
/// ConfigEnumerator rank over the ball.
///
/// The radius-0 ball is special: the boundary law carries no value at
/// the root (the root has k+1 successors, one more than the system's
/// k-fold products), so mu^(0) uses the value the system itself assigns
/// there, z_{i,root} = prod_{y in S(root)} F_i(z_y).  This is the
/// unique choice under which the marginal identity holds at n = 1 and
/// Z_1 = a(root) Z_0.
struct MeasureTable {
  unsigned level = 0;
  std::optional<PadicNumber> partition;  // Z_n
  std::vector<PadicNumber> mu;
};

PadicNumber partition_function(const BoundaryField& field, const TreeVolume& vol,
                               const ModelParams& params,
                               uint64_t cap = default_enumeration_cap);

MeasureTable measure_table(const BoundaryField& field, const TreeVolume& vol,
                           const ModelParams& params,
                           uint64_t cap = default_enumeration_cap);

/// Single-configuration evaluation (computes Z_n; use measure_table for
/// bulk work).
PadicNumber mu_n(const BoundaryField& field, const TreeVolume& vol,
                 const SpinConfiguration& sigma, const ModelParams& params,
                 uint64_t cap = default_enumeration_cap);

/// a(x) = prod_{y in S(x)} (sum_{j<m} theta^(m-j) z_{j,y} + 1): the
/// factor relating consecutive partition functions, Z_n = A_{n-1}
/// Z_{n-1} with A_{n-1} = prod_{y in W_{n-1}} a(y).  x must not be a
/// leaf of the volume.
PadicNumber a_factor(const BoundaryField& field, const TreeVolume& vol, std::size_t vertex,
                     const ModelParams& params);

struct CompatibilityReport {
  bool pass = false;
  int64_t max_residual_exp = INT64_MIN;  // |residual|_p <= p^(this), exact when nonzero
  int64_t threshold_exp = 0;             // pass when max <= threshold
};

/// Brute-force marginalization check at level n: for every
/// sigma in Omega_{V_{n-1}}, sums mu^(n) over the W_n extensions and
/// compares with mu^(n-1)(sigma).  `target_precision` sets the
/// threshold p^-(target - slack); 0 means the params' precision.  When
/// p | m+1 the caller should supply params/field at raised precision
/// (the quotient by Z_n costs 2 v_p(Z_n) absolute digits).
CompatibilityReport check_compatibility(const BoundaryField& field, const ModelParams& params,
                                        unsigned n, uint64_t cap = default_enumeration_cap,
                                        int64_t slack = verify_slack,
                                        int32_t target_precision = 0);

struct BoundednessLevelData {
  unsigned n = 0;
  int64_t partition_valuation = 0;          // v_p(Z_n)
  int64_t mu_norm_exp_min = 0;              // min over sigma of e: |mu| = p^e
  int64_t mu_norm_exp_max = 0;
  int64_t a_root_valuation = 0;             // v_p(a(root))
  std::optional<int64_t> a_internal_valuation;  // v_p(a(x)), x in W_1, when n >= 2
  int64_t big_a_valuation = 0;              // v_p(A_{n-1}) = sum over W_{n-1}
  uint64_t reference_bound_exp = 0;         // k |V_{n-1}|
};

/// Boundedness dichotomy: the measures are bounded iff p does not
/// divide m+1.  When a field is available (supplied, or solvable), the
/// report also carries measured norms at levels 1..max_level.
struct BoundednessReport {
  bool bounded = false;
  uint64_t p = 0;
  unsigned k = 0;
  unsigned m = 0;
  bool has_field = false;
  std::vector<BoundednessLevelData> levels;
  std::vector<std::string> notes;
};

BoundednessReport classify_boundedness(const ModelParams& params,
                                       const std::optional<BoundaryField>& field = std::nullopt,
                                       unsigned max_level = 2,
                                       uint64_t cap = default_enumeration_cap);

}  // namespace psos
