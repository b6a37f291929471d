#include "psos/json_io.hpp"

#include "psos/errors.hpp"

namespace psos {

using nlohmann::json;

json to_json(const PadicNumber& x) {
  json j;
  j["prime"] = x.prime();
  if (x.is_zero()) {
    j["zero"] = true;
    j["precision"] = x.zero_precision();
    return j;
  }
  j["valuation"] = x.valuation();
  j["precision"] = x.precision();
  j["digits"] = x.digits(x.precision());
  return j;
}

PadicNumber padic_from_json(const json& j) {
  if (!j.is_object() || !j.contains("prime") || !j.contains("precision")) {
    throw ParseError("p-adic value needs 'prime' and 'precision'");
  }
  uint64_t p = j.at("prime").get<uint64_t>();
  if (j.value("zero", false)) {
    return PadicNumber::zero(p, j.at("precision").get<int64_t>());
  }
  if (!j.contains("valuation") || !j.contains("digits")) {
    throw ParseError("nonzero p-adic value needs 'valuation' and 'digits'");
  }
  int32_t prec = j.at("precision").get<int32_t>();
  auto digits = j.at("digits").get<std::vector<uint32_t>>();
  if (digits.size() != static_cast<size_t>(prec)) {
    throw ParseError("digit list length must equal the precision");
  }
  mpz_class unit(0);
  for (size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= p) throw ParseError("digit out of range");
    unit = unit * static_cast<unsigned long>(p) + digits[i];
  }
  if (unit == 0 || mpz_fdiv_ui(unit.get_mpz_t(), static_cast<unsigned long>(p)) == 0) {
    throw ParseError("digits do not form a canonical unit (x_0 must be > 0)");
  }
  return PadicNumber::from_unit(p, j.at("valuation").get<int64_t>(), unit, prec);
}

json to_json(const BoundaryField& field) {
  json j;
  if (field.is_translation_invariant()) {
    j["mode"] = "translation_invariant";
    json values = json::array();
    for (const PadicNumber& z : field.ti_values()) values.push_back(to_json(z));
    j["values"] = values;
  } else {
    j["mode"] = "per_vertex";
    json values = json::array();
    for (std::size_t v = 0; v < field.vertex_count(); ++v) {
      json vec = json::array();
      for (const PadicNumber& z : field.at(v)) vec.push_back(to_json(z));
      values.push_back(vec);
    }
    j["values"] = values;
  }
  return j;
}

BoundaryField field_from_json(const json& j, FieldCheck check) {
  std::string mode = j.value("mode", "translation_invariant");
  if (!j.contains("values")) throw ParseError("field needs 'values'");
  if (mode == "translation_invariant") {
    std::vector<PadicNumber> values;
    for (const json& v : j.at("values")) values.push_back(padic_from_json(v));
    return BoundaryField::translation_invariant(std::move(values), check);
  }
  if (mode == "per_vertex") {
    std::vector<std::vector<PadicNumber>> values;
    for (const json& vec : j.at("values")) {
      std::vector<PadicNumber> zs;
      for (const json& v : vec) zs.push_back(padic_from_json(v));
      values.push_back(std::move(zs));
    }
    return BoundaryField::per_vertex(std::move(values), check);
  }
  throw ParseError("unknown field mode: " + mode);
}

json to_json(const ModelParams& params) {
  json j;
  j["p"] = params.prime();
  j["k"] = params.order();
  j["m"] = params.spin_max();
  j["precision"] = params.precision();
  j["theta"] = to_json(params.theta());
  j["coupling"] = to_json(params.coupling());
  return j;
}

json to_json(const SqrtProbe& probe) {
  json j;
  j["value_is_zero"] = probe.value_is_zero;
  j["exists"] = probe.exists;
  if (!probe.value_is_zero) j["valuation"] = probe.valuation;
  return j;
}

json to_json(const QuarticDiagnostics& diag) {
  json j;
  j["degenerate_path"] = diag.degenerate_path;
  if (diag.big_d) j["D"] = to_json(*diag.big_d);
  j["D_is_zero"] = diag.d_is_zero;
  j["sqrt_D"] = to_json(diag.sqrt_d);
  json fams = json::array();
  for (const QuarticFamily& fam : diag.families) {
    json f;
    f["sign"] = fam.sign;
    f["paper_test"] = to_json(fam.paper_test);
    f["gate"] = to_json(fam.gate);
    f["candidates"] = fam.candidate_log;
    fams.push_back(f);
  }
  j["families"] = fams;
  return j;
}

json to_json(const GibbsCertificate& cert) {
  json j;
  json params;
  params["p"] = cert.p;
  params["k"] = cert.k;
  params["m"] = cert.m;
  params["precision"] = cert.precision;
  if (cert.theta) params["theta"] = to_json(*cert.theta);
  j["params"] = params;
  j["verdict"] = to_string(cert.verdict);
  j["boundedness"] = cert.bounded ? "bounded" : "unbounded";
  json sols = json::array();
  for (const SolutionRecord& rec : cert.solutions) {
    json s;
    s["field"] = to_json(rec.field);
    s["provenance"] = rec.provenance;
    json residues = json::array();
    for (const PadicNumber& z : rec.field.ti_values()) {
      residues.push_back(z.is_zero() ? json::array() : json(z.digits(std::min(3, z.precision()))));
    }
    s["residues_mod_p3"] = residues;
    sols.push_back(s);
  }
  j["solutions"] = sols;
  j["notes"] = cert.notes;
  if (cert.quartic) j["quartic_diagnostics"] = to_json(*cert.quartic);
  return j;
}

json to_json(const MeasureTable& table, const TreeVolume& vol, const ModelParams& params) {
  json j;
  j["level"] = table.level;
  if (table.partition) j["partition_function"] = to_json(*table.partition);
  json entries = json::array();
  ConfigEnumerator en(vol, params.spin_max(), Region::ball, vol.radius());
  for (size_t idx = 0; en.valid() && idx < table.mu.size(); en.advance(), ++idx) {
    json e;
    e["config"] = en.config().spins;
    e["mu"] = to_json(table.mu[idx]);
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j;
}

json to_json(const TreeVolume& vol) {
  json j;
  j["k"] = vol.order();
  j["n"] = vol.radius();
  j["vertex_count"] = vol.vertex_count();
  json levels = json::array();
  for (unsigned lev = 0; lev <= vol.radius(); ++lev) {
    json l;
    l["level"] = lev;
    l["size"] = vol.level_size(lev);
    l["first_vertex"] = vol.level_begin(lev);
    levels.push_back(l);
  }
  j["levels"] = levels;
  json edges = json::array();
  for (const auto& [x, y] : vol.edges()) edges.push_back({x, y});
  j["edges"] = edges;
  return j;
}

json to_json(const CompatibilityReport& report) {
  json j;
  j["pass"] = report.pass;
  j["max_residual_norm_exp"] = report.max_residual_exp;
  j["threshold_norm_exp"] = report.threshold_exp;
  return j;
}

json to_json(const BoundednessReport& report) {
  json j;
  j["class"] = report.bounded ? "bounded" : "unbounded";
  j["p"] = report.p;
  j["k"] = report.k;
  j["m"] = report.m;
  j["has_field"] = report.has_field;
  json levels = json::array();
  for (const BoundednessLevelData& data : report.levels) {
    json l;
    l["n"] = data.n;
    l["partition_valuation"] = data.partition_valuation;
    l["mu_norm_exp_min"] = data.mu_norm_exp_min;
    l["mu_norm_exp_max"] = data.mu_norm_exp_max;
    l["a_root_valuation"] = data.a_root_valuation;
    if (data.a_internal_valuation) l["a_internal_valuation"] = *data.a_internal_valuation;
    l["big_a_valuation"] = data.big_a_valuation;
    l["reference_bound_exp"] = data.reference_bound_exp;
    levels.push_back(l);
  }
  j["levels"] = levels;
  j["notes"] = report.notes;
  return j;
}

}  // namespace psos
