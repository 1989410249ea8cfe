#pragma once

#include "twpa/presburger/formula.hpp"

#include <vector>

namespace twpa::presburger {

/// base + N * periods.
struct LinearSet {
  Vector base;
  std::vector<Vector> periods;
};

/// Finite union of linear sets of one dimension.
struct SemiLinearSet {
  std::size_t dimension = 0;
  std::vector<LinearSet> components;

  /// Throws InvalidArgument when a vector has the wrong dimension.
  void check() const;
};

/// Existential formula over vars (x1..xd by default) whose models are exactly the members.
Formula semilinear_to_formula(const SemiLinearSet& s);
Formula semilinear_to_formula(const SemiLinearSet& s, const std::vector<VarId>& vars);

/// Exact membership, decided by the solver.
bool member_semilinear(const SemiLinearSet& s, const Vector& v);

}  // namespace twpa::presburger
