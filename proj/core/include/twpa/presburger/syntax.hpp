#pragma once

#include "twpa/presburger/formula.hpp"

#include <string>
#include <string_view>

namespace twpa::presburger {

/// Parses the surface grammar:
///   exists x. F | forall x, y. F | F \/ F | F /\ F | ~F | (F) | true | false
///   t <= t | t < t | t = t | t >= t | t > t | m | t
///   t + t | 2*(t) | n*t | n | x
/// Free variables are interned by name, bound variables are fresh.
/// Throws ParseError carrying the column in the message.
Formula parse_formula(std::string_view text);

/// Parses a term; every variable is interned by name.
LinearExpr parse_linear(std::string_view text);

struct PrintOptions {
  /// Render constants through their binary {0,1,+,2*()} encoding instead of decimals.
  bool binary_constants = false;
  /// Variables printed as the given constants (moved across comparisons when negative).
  const Valuation* constants = nullptr;
};

/// Renders in the surface grammar; the result parses back to an equivalent formula.
std::string to_string(const Formula& f, const PrintOptions& options = {});

/// Renders a linear expression with nonnegative coefficients in surface syntax.
std::string surface_term(const LinearExpr& e, const PrintOptions& options = {});

}  // namespace twpa::presburger
