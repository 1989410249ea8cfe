#pragma once

#include "twpa/presburger/formula.hpp"

namespace twpa::presburger {

/// Cooper elimination of x from the quantifier-free formula body, i.e. a quantifier-free
/// formula equivalent to exists x. body. May introduce divisibility atoms.
Formula cooper_eliminate_one(VarId x, const Formula& body);

/// Quantifier-free formula equivalent to f; universal quantifiers are handled as
/// not-exists-not. Sentences reduce to true or false.
Formula eliminate_all(const Formula& f);

}  // namespace twpa::presburger
