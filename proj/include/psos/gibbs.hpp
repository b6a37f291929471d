#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psos/field.hpp"
#include "psos/model.hpp"
#include "psos/poly.hpp"
#include "psos/tree.hpp"

namespace psos {

/// Default number of digits below working precision tolerated in
/// residual checks.
inline constexpr int64_t verify_slack = 8;

/// sum(a_j z_j) / sum(b_j z_j), j = 0..m.  The generic ratio whose
/// contraction properties drive uniqueness when p does not divide m+1.
PadicNumber moebius_ratio(std::span<const PadicNumber> num_coeffs,
                          std::span<const PadicNumber> den_coeffs,
                          std::span<const PadicNumber> z);

/// Denominator of the boundary-law ratio: sum_{j<m} theta^(m-j) z_j + 1.
/// Its valuation is 0 precisely when p does not divide m+1; a positive
/// valuation here is what makes the measures unbounded.
PadicNumber rhs_denominator(std::span<const PadicNumber> z, const ModelParams& params);

/// F_i(z) = (sum_{j<m} theta^|i-j| z_j + theta^(m-i)) / rhs_denominator.
/// Defined for i = 0..m (F_m is identically 1).  Throws
/// PrecisionExhaustedError when the denominator vanishes at precision.
PadicNumber rhs_component(std::span<const PadicNumber> z, unsigned i,
                          const ModelParams& params);

struct TiSolveStats {
  unsigned iterations = 0;
};

/// The unique translation-invariant boundary law for p not dividing
/// m+1, found by iterating z <- (F_0(z)^k, ..., F_{m-1}(z)^k, 1).  Each
/// step contracts distances by at least 1/p, so the iteration reaches
/// the fixed mantissa in at most one step per tracked digit.
BoundaryField solve_ti_unique(const ModelParams& params);
BoundaryField solve_ti_unique(const ModelParams& params, std::span<const PadicNumber> start,
                              TiSolveStats* stats = nullptr);

/// g(x) = theta x^(k+1) - x^k + (theta^2+1) x - 2 theta (m = 2 only).
/// Roots x give z_1 = x^k solving the z_0 = 1 slice of the system.
PadicPoly build_g_poly(const ModelParams& params);

struct HenselRoot {
  unsigned residue = 0;  // r = a0 mod p
  unsigned index = 0;    // Hensel index i
  unsigned long start = 0;  // the a0 in [0, p^(i+1)) that lifted
  PadicNumber x;
};

enum class ResidueOutcome {
  lifted,        // at least one a0 over this residue lifted
  excluded,      // congruence refinement proved there is no root here
  inconclusive,  // no valid index and refinement exhausted its budget
};

struct ResidueScan {
  unsigned residue = 0;
  ResidueOutcome outcome = ResidueOutcome::inconclusive;
  unsigned refinement_depth = 0;  // levels examined when not lifted
};

struct Z0BranchResult {
  std::vector<HenselRoot> roots;            // deduplicated
  std::vector<ResidueScan> residues;        // residues r with g(r) = 0 mod p
  std::vector<BoundaryField> solutions;     // verified (1, x^k, 1) fields
  std::vector<std::string> rejected;        // roots cut by E_p or residual checks
};

/// Scans residues mod p with g = 0 (mod p); for each, tries Hensel
/// lifting with the smallest index i <= 4, considering every lift
/// a0 = r (mod p) below p^(i+1) (the hypotheses constrain a0 mod
/// p^(i+1), not r alone).  m = 2 only.
Z0BranchResult solve_z0_equal_1_branch(const ModelParams& params);

/// Existence probe of one square root in the quartic chain.
struct SqrtProbe {
  bool value_is_zero = false;  // probed value vanished at precision
  bool exists = false;
  int64_t valuation = 0;  // of the probed value when nonzero
};

struct QuarticFamily {
  int sign = 0;     // sign attached to sqrt(D); 0 on the degenerate path
  SqrtProbe paper_test;  // 2(1-7t^2+s sqrt(D)), or 1-7t^2 on the degenerate path
  SqrtProbe gate;        // (1-7t^2+s sqrt(D))(1+t^2+s sqrt(D)); the actual gate
  std::vector<std::string> candidate_log;
};

struct QuarticDiagnostics {
  bool degenerate_path = false;  // 12 t^3 - 4 t + 1 = 0 at precision
  std::optional<PadicNumber> big_d;  // D = t^4 + 2 t^2 - 4 t + 1
  bool d_is_zero = false;
  SqrtProbe sqrt_d;
  std::vector<QuarticFamily> families;
};

struct QuarticSolution {
  BoundaryField field;  // (x^2, y^2, 1)
  PadicNumber x;
  PadicNumber y;
  int sign = 0;
};

struct QuarticBranchResult {
  std::vector<QuarticSolution> solutions;
  QuarticDiagnostics diag;
};

/// z_0 != 1 solutions of the three-state system on the order-2 tree via
/// the substitution x = sqrt(z_0), y = sqrt(z_1): resolvent in
/// t = x + 1/x, discriminant D, closed-form roots gated by square-root
/// existence.  Requires m = 2, k = 2, odd p (the p = 3 case is the
/// interesting one; other p confirm emptiness).  An empty solution list
/// is a valid outcome.
QuarticBranchResult solve_three_state_k2_p3(const ModelParams& params);

struct ResidualReport {
  bool ok = false;
  // max over residuals of e with |res|_p <= p^e (exact when nonzero)
  int64_t max_norm_exp = INT64_MIN;
  int64_t threshold_exp = 0;  // pass when max_norm_exp <= threshold_exp
};

/// Residuals z_i - prod_{y in S(x)} F_i(z_y) of the boundary-law
/// system.  Translation-invariant fields check the k-th power form; a
/// per-vertex field is checked on every non-root, non-leaf vertex of
/// the supplied volume.
ResidualReport solution_residual(const BoundaryField& field, const ModelParams& params,
                                 int64_t slack = verify_slack);
ResidualReport solution_residual(const BoundaryField& field, const ModelParams& params,
                                 const TreeVolume& vol, int64_t slack = verify_slack);
bool verify_solution(const BoundaryField& field, const ModelParams& params,
                     int64_t slack = verify_slack);

/// True when some component differs by norm >= p^(-separation_digits).
bool fields_distinct(const BoundaryField& a, const BoundaryField& b,
                     int64_t separation_digits);

enum class Verdict { unique_no_transition, transition_certified, inconclusive };
const char* to_string(Verdict v);

struct SolutionRecord {
  BoundaryField field;
  std::string provenance;
};

/// Outcome record: solutions with provenance, uniqueness / transition
/// verdict, boundedness class of the associated measures.
struct GibbsCertificate {
  uint64_t p = 0;
  unsigned k = 0;
  unsigned m = 0;
  std::optional<PadicNumber> theta;
  int32_t precision = 0;
  Verdict verdict = Verdict::inconclusive;
  bool bounded = false;
  std::vector<SolutionRecord> solutions;
  std::vector<std::string> notes;
  std::optional<QuarticDiagnostics> quartic;
};

/// p not dividing m+1: contraction solver, verdict unique_no_transition.
/// p | m+1, m = 2: both branch solvers; transition_certified when two
/// verified solutions separate by at least p^(-N/2).  Other p | m+1
/// cases: bounded residue search mod p^2 with guarded refinement,
/// always inconclusive (non-exhaustive).
GibbsCertificate certify(const ModelParams& params);

}  // namespace psos
