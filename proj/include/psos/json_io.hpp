#pragma once

#include <json.hpp>

#include "psos/field.hpp"
#include "psos/gibbs.hpp"
#include "psos/measure.hpp"
#include "psos/model.hpp"
#include "psos/tree.hpp"

namespace psos {

/// Canonical serialization of a p-adic number:
///   {"prime":p,"valuation":v,"digits":[x_0,...,x_{N-1}],"precision":N}
/// and for a value that is zero at precision O(p^M):
///   {"prime":p,"zero":true,"precision":M}
/// Digits are the canonical base-p expansion of the unit, low to high,
/// padded with trailing zeros to length N, so serialization round-trips
/// bit-exactly.
nlohmann::json to_json(const PadicNumber& x);
PadicNumber padic_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BoundaryField& field);
BoundaryField field_from_json(const nlohmann::json& j,
                              FieldCheck check = FieldCheck::boundary_law);

nlohmann::json to_json(const ModelParams& params);

nlohmann::json to_json(const SqrtProbe& probe);
nlohmann::json to_json(const QuarticDiagnostics& diag);
nlohmann::json to_json(const GibbsCertificate& cert);

/// Includes the spin tuples, regenerated in enumeration order.
nlohmann::json to_json(const MeasureTable& table, const TreeVolume& vol,
                       const ModelParams& params);
nlohmann::json to_json(const TreeVolume& vol);
nlohmann::json to_json(const CompatibilityReport& report);
nlohmann::json to_json(const BoundednessReport& report);

}  // namespace psos
