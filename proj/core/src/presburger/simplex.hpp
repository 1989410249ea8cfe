#pragma once

#include "twpa/presburger/solver.hpp"

namespace twpa::presburger {

/// Feasibility over the rationals of the inequalities and equalities in cs; divisibility
/// literals are ignored. False means the integer system is infeasible too.
bool rational_feasible(const std::vector<Constraint>& cs);

struct IntegerSearch {
  enum class Result { kModel, kInfeasible, kUnknown };
  Result result;
  Valuation model;
};

/// Branch and bound over the rational relaxation, divisibility literals included. Gives
/// up with kUnknown after node_budget relaxations.
IntegerSearch integer_search(const std::vector<Constraint>& cs, std::size_t node_budget);

}  // namespace twpa::presburger
