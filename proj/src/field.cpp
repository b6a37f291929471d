#include "psos/field.hpp"

#include <algorithm>

#include "psos/errors.hpp"

namespace psos {

namespace {

void validate_vector(const std::vector<PadicNumber>& z, FieldCheck check, uint64_t prime) {
  if (z.size() < 2) throw DomainError("field vector needs at least two components");
  for (const PadicNumber& c : z) {
    if (c.prime() != prime) throw PrimeMismatchError("mixed primes in field vector");
    DomainFlags f = domain_flags(c);
    if (check == FieldCheck::boundary_law) {
      if (!f.in_Ep) {
        throw DomainError("field component outside E_p: " + c.to_string());
      }
    } else if (!f.in_Zp_star) {
      throw DomainError("field component is not a unit: " + c.to_string());
    }
  }
  if (check == FieldCheck::boundary_law) {
    const PadicNumber& last = z.back();
    if (last.is_zero() || last.valuation() != 0 || last.unit() != 1) {
      throw DomainError("field is not normalized: last component must be exactly 1");
    }
  }
}

int32_t min_precision(const std::vector<PadicNumber>& z) {
  int32_t p = z.front().precision();
  for (const PadicNumber& c : z) p = std::min(p, c.precision());
  return p;
}

}  // namespace

BoundaryField BoundaryField::translation_invariant(std::vector<PadicNumber> values,
                                                   FieldCheck check) {
  if (values.empty()) throw DomainError("empty field vector");
  BoundaryField f;
  f.prime_ = values.front().prime();
  validate_vector(values, check, f.prime_);
  f.spin_count_ = static_cast<unsigned>(values.size());
  f.precision_ = min_precision(values);
  f.ti_ = std::move(values);
  return f;
}

BoundaryField BoundaryField::per_vertex(std::vector<std::vector<PadicNumber>> values,
                                        FieldCheck check) {
  if (values.empty() || values.front().empty()) throw DomainError("empty per-vertex field");
  BoundaryField f;
  f.prime_ = values.front().front().prime();
  f.spin_count_ = static_cast<unsigned>(values.front().size());
  f.precision_ = INT32_MAX;
  for (const auto& z : values) {
    if (z.size() != f.spin_count_) {
      throw DomainError("per-vertex field vectors have inconsistent lengths");
    }
    validate_vector(z, check, f.prime_);
    f.precision_ = std::min(f.precision_, min_precision(z));
  }
  f.per_vertex_ = std::move(values);
  return f;
}

const std::vector<PadicNumber>& BoundaryField::at(std::size_t vertex) const {
  if (is_translation_invariant()) return ti_;
  if (vertex >= per_vertex_.size()) throw DomainError("vertex id outside the field's volume");
  return per_vertex_[vertex];
}

const std::vector<PadicNumber>& BoundaryField::ti_values() const {
  if (!is_translation_invariant()) {
    throw PreconditionError("field is not translation invariant");
  }
  return ti_;
}

}  // namespace psos
