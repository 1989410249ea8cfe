#pragma once

#include "twpa/automaton.hpp"
#include "twpa/presburger/formula.hpp"

#include <optional>
#include <vector>

namespace twpa {

/// Occurrence counts of accepting runs of a one-way automaton, as integer flows.
/// formula holds iff the edge variables count the transitions of some accepting run
/// (weights and the acceptance constraint are ignored). Its free variables are the edge
/// variables and the auxiliary distance variables.
struct FlowEncoding {
  presburger::Formula formula;
  /// formula without the connectivity part: non-negativity, one BEGIN, one END, balance.
  presburger::Formula balance;
  /// Per transition; nullopt for transitions no accepting run can use.
  std::vector<std::optional<presburger::VarId>> edge;
  std::vector<presburger::VarId> auxiliary;

  /// Sum of the edge variables of the given transitions.
  presburger::LinearExpr count(const std::vector<TransitionId>& transitions) const;
};

/// Throws InvalidArgument on automata with L-reading states.
FlowEncoding flow_encoding(const Automaton& one_way);

/// When the transitions used by a model of flow.balance are not all reachable from its
/// BEGIN edge, a cut that every accepting run satisfies and the model violates; nullopt
/// when the support is connected. Adding cuts to balance until none is returned decides
/// flow.formula without its distance variables.
std::optional<presburger::Formula> connectivity_cut(const Automaton& one_way, const FlowEncoding& flow,
                                                    const presburger::Valuation& model);

/// The distinct weight vectors of a one-way automaton, in order of first occurrence, and
/// the index of each transition's vector.
struct VectorAlphabetView {
  std::vector<Vector> vectors;
  std::vector<std::size_t> index;
};

VectorAlphabetView vector_alphabet_view(const Automaton& one_way);

/// Existential formula over tau (one variable per letter, alphabet order) whose models are
/// the Parikh images of the words having an accepting run, ignoring the constraint.
presburger::Formula parikh_image_formula(const Automaton& one_way, const std::vector<presburger::VarId>& tau);

/// phi(ell): some word of length ell is accepted, constraint included. Built from the
/// flow over the vector alphabet; ell + 2 counts the endmarker transitions too.
presburger::Formula length_formula(const Automaton& one_way, presburger::VarId ell);

/// Letter counts in alphabet order. Throws InvalidArgument on endmarkers or unknown letters.
Vector parikh_vector(const Automaton& a, const Word& w);

}  // namespace twpa
