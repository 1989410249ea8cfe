#pragma once

#include "twpa/presburger/formula.hpp"

#include <random>
#include <vector>

namespace twpa::testing {

struct FormulaShape {
  int depth = 3;
  int max_coefficient = 3;
  int max_constant = 5;
  int max_modulus = 4;
  bool quantifiers = false;
  /// When positive, quantified variables are guarded to [-range, range].
  int range = 0;
};

/// Random formula over the given free variables.
presburger::Formula random_formula(std::mt19937& rng, const std::vector<presburger::VarId>& vars,
                                   const FormulaShape& shape);

presburger::LinearExpr random_linear(std::mt19937& rng, const std::vector<presburger::VarId>& vars,
                                     const FormulaShape& shape);

/// Truth of f by brute force: quantifiers range over [-bound, bound].
bool eval_bounded(const presburger::Formula& f, presburger::Valuation& v, int bound);

}  // namespace twpa::testing
