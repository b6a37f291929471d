#include "psos/gibbs.hpp"

#include <algorithm>

#include "psos/analytic.hpp"
#include "psos/errors.hpp"

namespace psos {

namespace {

// |x|_p <= p^(bound_exp(x)), exact for nonzero values.
int64_t bound_exp(const PadicNumber& x) {
  return x.is_zero() ? -x.zero_precision() : -x.valuation();
}

std::vector<PadicNumber> theta_powers(const ModelParams& params, unsigned top) {
  std::vector<PadicNumber> pw;
  pw.reserve(top + 1);
  pw.push_back(PadicNumber::one(params.prime(), params.precision()));
  for (unsigned e = 1; e <= top; ++e) pw.push_back(pw.back() * params.theta());
  return pw;
}

}  // namespace

PadicNumber moebius_ratio(std::span<const PadicNumber> num_coeffs,
                          std::span<const PadicNumber> den_coeffs,
                          std::span<const PadicNumber> z) {
  if (num_coeffs.size() != z.size() || den_coeffs.size() != z.size() || z.empty()) {
    throw PreconditionError("moebius_ratio needs coefficient vectors matching z");
  }
  PadicNumber num = num_coeffs[0] * z[0];
  PadicNumber den = den_coeffs[0] * z[0];
  for (size_t j = 1; j < z.size(); ++j) {
    num = num + num_coeffs[j] * z[j];
    den = den + den_coeffs[j] * z[j];
  }
  if (den.is_zero()) {
    throw PrecisionExhaustedError("ratio denominator vanishes at working precision");
  }
  return num / den;
}

PadicNumber rhs_denominator(std::span<const PadicNumber> z, const ModelParams& params) {
  unsigned m = params.spin_max();
  if (z.size() != m + 1) throw PreconditionError("field vector length must be m+1");
  std::vector<PadicNumber> pw = theta_powers(params, m);
  PadicNumber den = PadicNumber::one(params.prime(), params.precision());
  for (unsigned j = 0; j < m; ++j) den = den + pw[m - j] * z[j];
  return den;
}

PadicNumber rhs_component(std::span<const PadicNumber> z, unsigned i,
                          const ModelParams& params) {
  unsigned m = params.spin_max();
  if (z.size() != m + 1) throw PreconditionError("field vector length must be m+1");
  if (i > m) throw PreconditionError("spin index out of range");
  std::vector<PadicNumber> pw = theta_powers(params, m);
  PadicNumber num = pw[m - i];  // j = m term (z_m = 1 normalization)
  for (unsigned j = 0; j < m; ++j) {
    unsigned d = i > j ? i - j : j - i;
    num = num + pw[d] * z[j];
  }
  PadicNumber den = rhs_denominator(z, params);
  if (den.is_zero()) {
    throw PrecisionExhaustedError("boundary-law denominator vanishes at working precision");
  }
  return num / den;
}

BoundaryField solve_ti_unique(const ModelParams& params) {
  std::vector<PadicNumber> start(params.spin_count(),
                                 PadicNumber::one(params.prime(), params.precision()));
  return solve_ti_unique(params, start);
}

BoundaryField solve_ti_unique(const ModelParams& params, std::span<const PadicNumber> start,
                              TiSolveStats* stats) {
  if (params.prime_divides_spin_count()) {
    throw PreconditionError("p divides m+1: the boundary-law map is not a contraction");
  }
  unsigned m = params.spin_max();
  if (start.size() != m + 1) throw PreconditionError("start vector length must be m+1");
  for (const PadicNumber& c : start) {
    if (!domain_flags(c).in_Ep) {
      throw PreconditionError("start vector must lie in E_p^(m+1)");
    }
  }
  std::vector<PadicNumber> z(start.begin(), start.end());
  z[m] = PadicNumber::one(params.prime(), params.precision());
  unsigned budget = static_cast<unsigned>(params.precision()) + 8;
  for (unsigned iter = 1; iter <= budget; ++iter) {
    std::vector<PadicNumber> next;
    next.reserve(m + 1);
    for (unsigned i = 0; i < m; ++i) {
      next.push_back(rhs_component(z, i, params).pow(params.order()));
    }
    next.push_back(z[m]);
    bool fixed = true;
    for (unsigned i = 0; i < m; ++i) {
      if (!next[i].identical_to(z[i])) {
        fixed = false;
        break;
      }
    }
    z = std::move(next);
    if (fixed) {
      if (stats) stats->iterations = iter;
      return BoundaryField::translation_invariant(std::move(z));
    }
  }
  throw NonConvergenceError("translation-invariant iteration did not stabilize within " +
                            std::to_string(budget) + " steps");
}

PadicPoly build_g_poly(const ModelParams& params) {
  if (params.spin_max() != 2) throw PreconditionError("g(x) is defined for m = 2 only");
  uint64_t p = params.prime();
  int32_t n = params.precision();
  unsigned k = params.order();
  const PadicNumber& th = params.theta();
  PadicNumber one = PadicNumber::one(p, n);
  std::vector<PadicNumber> c(k + 2, PadicNumber::zero(p, n));
  c[0] = -(th * 2L);
  c[1] = th * th + one;
  c[k] = c[k] - one;
  c[k + 1] = c[k + 1] + th;
  return PadicPoly(std::move(c));
}

namespace {

constexpr unsigned max_hensel_index = 4;
constexpr unsigned long lift_enumeration_cap = 1ul << 22;
constexpr unsigned refinement_budget = 12;
constexpr size_t refinement_set_cap = 4096;

// Solution sets of g = 0 (mod p^j) above residue r, refined level by
// level; an empty level proves there is no Z_p root over r.
ResidueOutcome refine_residue(const PadicPoly& g, unsigned long r, unsigned& depth_out) {
  uint64_t p = g.prime();
  int32_t n = g.coeff(0).precision();
  std::vector<mpz_class> level{mpz_class(static_cast<unsigned long>(r))};
  unsigned max_depth = std::min<unsigned>(refinement_budget, static_cast<unsigned>(n) - 1);
  for (unsigned j = 2; j <= max_depth; ++j) {
    std::vector<mpz_class> next;
    mpz_class step = prime_power(p, j - 1);
    for (const mpz_class& a : level) {
      for (unsigned long t = 0; t < p; ++t) {
        mpz_class cand = a + step * static_cast<long>(t);
        PadicNumber val = g.eval(PadicNumber::from_integer(p, cand, n));
        if (val.norm_at_most(-static_cast<int64_t>(j))) next.push_back(cand);
      }
    }
    depth_out = j;
    if (next.empty()) return ResidueOutcome::excluded;
    if (next.size() > refinement_set_cap) return ResidueOutcome::inconclusive;
    level = std::move(next);
  }
  return ResidueOutcome::inconclusive;
}

}  // namespace

Z0BranchResult solve_z0_equal_1_branch(const ModelParams& params) {
  if (params.spin_max() != 2) {
    throw PreconditionError("the z_0 = 1 branch solver handles m = 2 only");
  }
  uint64_t p = params.prime();
  if (p > (uint64_t(1) << 20)) {
    throw CapExceededError("residue scan over p classes is too large for this prime");
  }
  int32_t n = params.precision();
  unsigned k = params.order();
  PadicPoly g = build_g_poly(params);
  PadicPoly gd = g.derivative();
  Z0BranchResult out;

  for (unsigned long r = 0; r < p; ++r) {
    PadicNumber gr = g.eval(PadicNumber::from_integer(p, static_cast<long>(r), n));
    if (!gr.norm_at_most(-1)) continue;
    ResidueScan scan;
    scan.residue = static_cast<unsigned>(r);
    bool lifted = false;
    for (unsigned i = 0; i <= max_hensel_index && !lifted; ++i) {
      unsigned long count = 1;
      for (unsigned e = 0; e < i; ++e) count *= static_cast<unsigned long>(p);
      if (count > lift_enumeration_cap / p) break;
      for (unsigned long s = 0; s < count; ++s) {
        unsigned long a0 = r + s * static_cast<unsigned long>(p);
        PadicNumber a0v = PadicNumber::from_integer(p, static_cast<long>(a0), n);
        if (!g.eval(a0v).norm_at_most(-(2 * static_cast<int64_t>(i) + 1))) continue;
        PadicNumber d = gd.eval(a0v);
        if (d.is_zero() || d.valuation() != static_cast<int64_t>(i)) continue;
        PadicNumber x = hensel_lift(g, a0v, i, n);
        bool duplicate = false;
        for (const HenselRoot& known : out.roots) {
          if (x.agrees_to(known.x, n / 2)) {
            duplicate = true;
            break;
          }
        }
        if (!duplicate) {
          out.roots.push_back(HenselRoot{static_cast<unsigned>(r), i, a0, x});
        }
        lifted = true;
      }
    }
    if (lifted) {
      scan.outcome = ResidueOutcome::lifted;
    } else {
      scan.outcome = refine_residue(g, r, scan.refinement_depth);
    }
    out.residues.push_back(scan);
  }

  PadicNumber one = PadicNumber::one(p, n);
  for (const HenselRoot& root : out.roots) {
    PadicNumber z1 = root.x.pow(k);
    if (!domain_flags(z1).in_Ep) {
      out.rejected.push_back("root over residue " + std::to_string(root.residue) +
                             ": x^k lies outside E_p");
      continue;
    }
    BoundaryField field = BoundaryField::translation_invariant({one, z1, one});
    if (!verify_solution(field, params)) {
      out.rejected.push_back("root over residue " + std::to_string(root.residue) +
                             ": residual check failed");
      continue;
    }
    out.solutions.push_back(std::move(field));
  }
  return out;
}

namespace {

SqrtProbe probe_sqrt(const PadicNumber& v) {
  SqrtProbe probe;
  if (v.is_zero()) {
    probe.value_is_zero = true;
    return probe;
  }
  probe.valuation = v.valuation();
  probe.exists = sqrt_exists(v).exists;
  return probe;
}

}  // namespace

QuarticBranchResult solve_three_state_k2_p3(const ModelParams& params) {
  if (params.spin_max() != 2 || params.order() != 2) {
    throw PreconditionError("the z_0 != 1 branch solver handles m = 2, k = 2 only");
  }
  uint64_t p = params.prime();
  if (p == 2) throw PreconditionError("the square-root substitution needs an odd prime");
  int32_t n = params.precision();
  const PadicNumber& th = params.theta();
  PadicNumber one = PadicNumber::one(p, n);
  PadicNumber th2 = th * th;
  PadicNumber th3 = th2 * th;

  QuarticBranchResult out;
  QuarticDiagnostics& diag = out.diag;

  PadicNumber big_d = th2 * th2 + th2 * 2L - th * 4L + one;
  diag.big_d = big_d;
  if (big_d.is_zero()) {
    diag.d_is_zero = true;
    return out;
  }

  auto process_candidate = [&](const PadicNumber& x, int sign,
                               std::vector<std::string>& log) {
    if (x.is_zero()) {
      log.push_back("candidate x vanishes at working precision");
      return;
    }
    PadicNumber xp1 = x + one;
    if (xp1.is_zero()) {
      log.push_back("candidate has x = -1 at working precision");
      return;
    }
    PadicNumber y = x / (th * xp1);
    PadicNumber z0 = x * x;
    PadicNumber z1 = y * y;
    if (!domain_flags(z0).in_Ep) {
      log.push_back("z_0 = x^2 outside E_p");
      return;
    }
    if (!domain_flags(z1).in_Ep) {
      log.push_back("z_1 = y^2 outside E_p");
      return;
    }
    if (z0.agrees_to(one, n / 2)) {
      log.push_back("z_0 equals 1 at the separation threshold");
      return;
    }
    BoundaryField field = BoundaryField::translation_invariant({z0, z1, one});
    if (!verify_solution(field, params)) {
      log.push_back("candidate failed the residual check");
      return;
    }
    for (const QuarticSolution& known : out.solutions) {
      if (!fields_distinct(known.field, field, n / 2)) {
        log.push_back("duplicate of an earlier solution");
        return;
      }
    }
    log.push_back("verified solution with z_0 != 1");
    out.solutions.push_back(QuarticSolution{std::move(field), x, y, sign});
  };

  PadicNumber twelve = th3 * 12L - th * 4L + one;
  if (twelve.is_zero()) {
    // quartic degenerates to (x-1)^2 (t^3 x^2 + t(5 t^2 - 1) x + t^3)
    diag.degenerate_path = true;
    QuarticFamily fam;
    fam.sign = 0;
    fam.paper_test = probe_sqrt(one - th2 * 7L);
    PadicNumber b = th * (th2 * 5L - one);
    PadicNumber disc = b * b - th3 * th3 * 4L;
    fam.gate = probe_sqrt(disc);
    if (fam.gate.exists) {
      PadicNumber sd = sqrt(disc);
      PadicNumber two_a = th3 * 2L;
      process_candidate((-b + sd) / two_a, 0, fam.candidate_log);
      process_candidate((-b - sd) / two_a, 0, fam.candidate_log);
    }
    diag.families.push_back(std::move(fam));
    return out;
  }

  diag.sqrt_d = probe_sqrt(big_d);
  if (!diag.sqrt_d.exists) return out;
  PadicNumber sqrt_big_d = sqrt(big_d);

  for (int sign : {+1, -1}) {
    QuarticFamily fam;
    fam.sign = sign;
    PadicNumber sd = sign > 0 ? sqrt_big_d : -sqrt_big_d;
    PadicNumber g_term = one - th2 * 7L + sd;   // 1 - 7 theta^2 + s sqrt(D)
    PadicNumber p_term = one + th2 + sd;        // 1 + theta^2 + s sqrt(D)
    fam.paper_test = probe_sqrt(g_term * 2L);
    PadicNumber inner = g_term * p_term;
    fam.gate = probe_sqrt(inner);
    if (fam.gate.exists) {
      PadicNumber root_inner = sqrt(inner);
      PadicNumber base = one - th2 * 3L + sd;
      PadicNumber den = th2 * 4L;
      process_candidate((base + root_inner) / den, sign, fam.candidate_log);
      process_candidate((base - root_inner) / den, sign, fam.candidate_log);
    }
    diag.families.push_back(std::move(fam));
  }
  return out;
}

ResidualReport solution_residual(const BoundaryField& field, const ModelParams& params,
                                 int64_t slack) {
  const std::vector<PadicNumber>& z = field.ti_values();
  if (z.size() != params.spin_count()) {
    throw PreconditionError("field length does not match the model's m+1");
  }
  ResidualReport report;
  int32_t n = std::min<int32_t>(params.precision(), field.precision());
  report.threshold_exp = -(n - slack);
  for (unsigned i = 0; i < params.spin_max(); ++i) {
    PadicNumber res = z[i] - rhs_component(z, i, params).pow(params.order());
    report.max_norm_exp = std::max(report.max_norm_exp, bound_exp(res));
  }
  report.ok = report.max_norm_exp <= report.threshold_exp;
  return report;
}

ResidualReport solution_residual(const BoundaryField& field, const ModelParams& params,
                                 const TreeVolume& vol, int64_t slack) {
  if (field.is_translation_invariant()) return solution_residual(field, params, slack);
  if (field.vertex_count() != vol.vertex_count()) {
    throw PreconditionError("per-vertex field does not match the volume");
  }
  ResidualReport report;
  int32_t n = std::min<int32_t>(params.precision(), field.precision());
  report.threshold_exp = -(n - slack);
  for (std::size_t x = 1; x < vol.vertex_count(); ++x) {
    std::span<const std::size_t> succ = vol.successors(x);
    if (succ.empty()) continue;
    for (unsigned i = 0; i < params.spin_max(); ++i) {
      PadicNumber prod = rhs_component(field.at(succ[0]), i, params);
      for (std::size_t j = 1; j < succ.size(); ++j) {
        prod = prod * rhs_component(field.at(succ[j]), i, params);
      }
      PadicNumber res = field.at(x)[i] - prod;
      report.max_norm_exp = std::max(report.max_norm_exp, bound_exp(res));
    }
  }
  report.ok = report.max_norm_exp <= report.threshold_exp;
  return report;
}

bool verify_solution(const BoundaryField& field, const ModelParams& params, int64_t slack) {
  return solution_residual(field, params, slack).ok;
}

bool fields_distinct(const BoundaryField& a, const BoundaryField& b,
                     int64_t separation_digits) {
  if (a.spin_count() != b.spin_count()) return true;
  std::size_t count = std::max<std::size_t>(
      1, std::max(a.vertex_count(), b.vertex_count()));
  for (std::size_t v = 0; v < count; ++v) {
    const auto& za = a.at(v);
    const auto& zb = b.at(v);
    for (unsigned i = 0; i < a.spin_count(); ++i) {
      if (!za[i].agrees_to(zb[i], separation_digits)) return true;
    }
  }
  return false;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::unique_no_transition: return "unique_no_transition";
    case Verdict::transition_certified: return "transition_certified";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Residue-pattern search mod p^2 with guarded exact refinement, for the
// p | m+1 cases the closed-form analysis does not cover.  Necessary
// condition at residue level: N_i(z)^k = z_i B(z)^k (mod p^(k+1)), one
// digit of information since both sides are divisible by p^k.
std::vector<SolutionRecord> bounded_residue_search(const ModelParams& params,
                                                   std::vector<std::string>& notes) {
  uint64_t p = params.prime();
  unsigned m = params.spin_max();
  unsigned k = params.order();
  int32_t n = params.precision();
  std::vector<SolutionRecord> found;

  uint64_t combos = 1;
  for (unsigned i = 0; i < m; ++i) {
    if (combos > (uint64_t(1) << 20) / p) {
      notes.push_back("residue search skipped: p^m patterns exceed the search cap");
      return found;
    }
    combos *= p;
  }
  notes.push_back("fixed-point search over residue patterns mod p^2 (non-exhaustive)");

  PadicNumber one = PadicNumber::one(p, n);
  for (uint64_t combo = 0; combo < combos; ++combo) {
    std::vector<PadicNumber> z;
    z.reserve(m + 1);
    uint64_t c = combo;
    for (unsigned i = 0; i < m; ++i) {
      long t = static_cast<long>(c % p);
      c /= p;
      z.push_back(PadicNumber::from_integer(p, 1 + static_cast<long>(p) * t, n));
    }
    z.push_back(one);

    PadicNumber den = rhs_denominator(z, params);
    bool pattern_ok = true;
    for (unsigned i = 0; i < m && pattern_ok; ++i) {
      PadicNumber num = rhs_component(z, i, params) * den;  // = N_i(z)
      PadicNumber lhs = num.pow(k);
      PadicNumber rhs = z[i] * den.pow(k);
      if (!(lhs - rhs).norm_at_most(-(static_cast<int64_t>(k) + 1))) pattern_ok = false;
    }
    if (!pattern_ok) continue;

    // Guarded refinement by exact iteration.  Each step genuinely loses
    // one tracked digit (the denominator valuation is positive when
    // p | m+1), so convergence is value agreement at shared precision,
    // followed by snapping the iterate to exact integers and a full
    // residual verification.
    std::vector<PadicNumber> zz = z;
    bool converged = false;
    bool aborted = false;
    for (int32_t iter = 0; iter < n && !converged && !aborted; ++iter) {
      std::vector<PadicNumber> next;
      next.reserve(m + 1);
      try {
        for (unsigned i = 0; i < m; ++i) {
          PadicNumber v = rhs_component(zz, i, params).pow(k);
          if (!domain_flags(v).in_Ep) throw DomainError("iterate left E_p");
          if (v.precision() < n / 2) throw PrecisionExhaustedError("iterate degraded");
          next.push_back(std::move(v));
        }
      } catch (const Error&) {
        aborted = true;
        break;
      }
      next.push_back(one);
      converged = true;
      for (unsigned i = 0; i < m; ++i) {
        if (!next[i].agrees_with(zz[i])) {
          converged = false;
          break;
        }
      }
      zz = std::move(next);
    }
    if (!converged) continue;
    std::vector<PadicNumber> snapped;
    snapped.reserve(m + 1);
    for (unsigned i = 0; i < m; ++i) {
      snapped.push_back(PadicNumber::from_unit(p, 0, zz[i].unit(), n));
    }
    snapped.push_back(one);
    BoundaryField field = BoundaryField::translation_invariant(std::move(snapped));
    if (!verify_solution(field, params)) continue;
    bool duplicate = false;
    for (const SolutionRecord& rec : found) {
      if (!fields_distinct(rec.field, field, n / 2)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      found.push_back(SolutionRecord{std::move(field),
                                     "bounded residue search, pattern " + std::to_string(combo)});
    }
  }
  return found;
}

}  // namespace

GibbsCertificate certify(const ModelParams& params) {
  GibbsCertificate cert;
  cert.p = params.prime();
  cert.k = params.order();
  cert.m = params.spin_max();
  cert.theta = params.theta();
  cert.precision = params.precision();
  cert.bounded = !params.prime_divides_spin_count();
  int64_t separation = params.precision() / 2;

  auto add_solution = [&](BoundaryField field, std::string provenance) {
    for (const SolutionRecord& rec : cert.solutions) {
      if (!fields_distinct(rec.field, field, separation)) return;
    }
    cert.solutions.push_back(SolutionRecord{std::move(field), std::move(provenance)});
  };

  if (!params.prime_divides_spin_count()) {
    TiSolveStats stats;
    std::vector<PadicNumber> start(params.spin_count(),
                                   PadicNumber::one(params.prime(), params.precision()));
    BoundaryField sol = solve_ti_unique(params, start, &stats);
    add_solution(std::move(sol), "translation-invariant contraction fixed point");
    cert.notes.push_back("contraction iterations: " + std::to_string(stats.iterations));
    cert.verdict = Verdict::unique_no_transition;
    return cert;
  }

  if (params.spin_max() == 2) {
    Z0BranchResult z0 = solve_z0_equal_1_branch(params);
    for (const HenselRoot& root : z0.roots) {
      PadicNumber z1 = root.x.pow(params.order());
      if (!domain_flags(z1).in_Ep) continue;
      PadicNumber one = PadicNumber::one(params.prime(), params.precision());
      BoundaryField f = BoundaryField::translation_invariant({one, z1, one});
      if (verify_solution(f, params)) {
        add_solution(std::move(f), "z0=1 branch, Hensel lift from a0=" +
                                       std::to_string(root.start) + " (index " +
                                       std::to_string(root.index) + ")");
      }
    }
    for (const ResidueScan& scan : z0.residues) {
      if (scan.outcome == ResidueOutcome::excluded) {
        cert.notes.push_back("residue " + std::to_string(scan.residue) +
                             ": no root (congruence refinement emptied at depth " +
                             std::to_string(scan.refinement_depth) + ")");
      } else if (scan.outcome == ResidueOutcome::inconclusive) {
        cert.notes.push_back("residue " + std::to_string(scan.residue) +
                             ": inconclusive (no admissible Hensel index)");
      }
    }
    for (const std::string& reason : z0.rejected) cert.notes.push_back("rejected: " + reason);

    if (params.order() == 2 && params.prime() != 2) {
      QuarticBranchResult quartic = solve_three_state_k2_p3(params);
      for (const QuarticSolution& sol : quartic.solutions) {
        add_solution(sol.field, std::string("z0!=1 branch, sqrt(D) sign ") +
                                    (sol.sign > 0 ? "+" : "-"));
      }
      cert.quartic = std::move(quartic.diag);
    } else {
      cert.notes.push_back("z0!=1 branch not attempted (needs k = 2 and odd p)");
    }
    cert.verdict = cert.solutions.size() >= 2 ? Verdict::transition_certified
                                              : Verdict::inconclusive;
    return cert;
  }

  for (SolutionRecord& rec : bounded_residue_search(params, cert.notes)) {
    add_solution(std::move(rec.field), std::move(rec.provenance));
  }
  cert.verdict = Verdict::inconclusive;
  return cert;
}

}  // namespace psos
