#pragma once

#include "twpa/presburger/formula.hpp"

#include <optional>
#include <vector>

namespace twpa::presburger {

/// A single literal of an integer linear system.
struct Constraint {
  enum class Type : std::uint8_t { kLe, kEq, kDvd, kNotDvd };
  Type type = Type::kLe;
  LinearExpr expr;  // kLe: expr <= 0, kEq: expr = 0, kDvd: modulus | expr
  Int modulus = 0;

  static Constraint le(LinearExpr e) { return {Type::kLe, std::move(e), 0}; }
  static Constraint eq(LinearExpr e) { return {Type::kEq, std::move(e), 0}; }
  static Constraint dvd(Int m, LinearExpr e) { return {Type::kDvd, std::move(e), std::move(m)}; }
  static Constraint not_dvd(Int m, LinearExpr e) { return {Type::kNotDvd, std::move(e), std::move(m)}; }

  bool holds(const Valuation& v) const;
};

/// Exact integer feasibility of a conjunction. Returns an integer solution covering every
/// variable that occurs, or nullopt when none exists.
std::optional<Valuation> solve_conjunction(const std::vector<Constraint>& constraints);

/// A model of f over its free variables (bound existentials are solved but not reported).
std::optional<Valuation> find_model(const Formula& f);

/// Whether some valuation of the free variables satisfies f.
bool is_satisfiable(const Formula& f);

/// Whether every valuation of the free variables satisfies f.
bool is_valid(const Formula& f);

/// Whether f holds under the valuation; f may contain quantifiers.
bool holds(const Formula& f, const Valuation& valuation);

}  // namespace twpa::presburger
