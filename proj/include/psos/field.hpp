#pragma once

#include <cstdint>
#include <vector>

#include "psos/padic.hpp"

namespace psos {

/// Validation level for boundary fields.  Solutions of the boundary-law
/// system live in E_p^(m+1) with last component 1; the measure kernel
/// also accepts plain unit vectors (a unit rescaling at a leaf must not
/// change the measure).
enum class FieldCheck { boundary_law, units_only };

/// z: vertex -> (z_0,...,z_m), either one shared vector
/// (translation-invariant) or one vector per vertex id of a volume.
class BoundaryField {
 public:
  static BoundaryField translation_invariant(std::vector<PadicNumber> values,
                                             FieldCheck check = FieldCheck::boundary_law);
  static BoundaryField per_vertex(std::vector<std::vector<PadicNumber>> values,
                                  FieldCheck check = FieldCheck::boundary_law);

  bool is_translation_invariant() const { return per_vertex_.empty(); }
  uint64_t prime() const { return prime_; }
  unsigned spin_count() const { return spin_count_; }
  /// Smallest relative precision over all components.
  int32_t precision() const { return precision_; }

  const std::vector<PadicNumber>& at(std::size_t vertex) const;
  const std::vector<PadicNumber>& ti_values() const;
  std::size_t vertex_count() const { return per_vertex_.size(); }

 private:
  BoundaryField() = default;

  uint64_t prime_ = 0;
  unsigned spin_count_ = 0;
  int32_t precision_ = 0;
  std::vector<PadicNumber> ti_;
  std::vector<std::vector<PadicNumber>> per_vertex_;
};

}  // namespace psos
