#pragma once

#include "twpa/automaton.hpp"
#include "twpa/presburger/formula.hpp"
#include "twpa/run.hpp"

#include <optional>

namespace twpa {

struct Witness {
  Word word;
  Run run;
  Vector value;
};

struct EmptinessVerdict {
  bool empty = true;
  std::optional<Witness> witness;
};

struct EmptinessOptions {
  bool witness = true;
  /// Search the shortest padded witness length by iterative deepening.
  bool shortest = true;
  /// Witnesses whose padded length exceeds this are not materialized.
  std::size_t max_witness_length = 100000;
};

/// Non-emptiness of a k-visit automaton: crossing-section conversion, length formula,
/// Presburger satisfiability. Any constraint class is accepted. Throws InvalidArgument
/// when k < 1.
EmptinessVerdict is_empty(const Automaton& a, std::size_t k, const EmptinessOptions& options = {});

/// Same pipeline; the name marks call sites that rely on constraints with universal
/// quantifiers.
EmptinessVerdict is_empty_generalized(const Automaton& a, std::size_t k, const EmptinessOptions& options = {});

/// phi(x1) of the pipeline: some padded word of length x1 is accepted by the converted
/// automaton.
presburger::Formula emptiness_formula(const Automaton& a, std::size_t k);

/// k defaults to the number of states for deterministic automata.
std::size_t default_visit_bound(const Automaton& a);

/// One-way automaton over a single letter whose states are the reachable
/// configurations of a on w.
Automaton configuration_automaton(const Automaton& a, const Word& w);

/// w in L(a), decided through the configuration automaton.
bool membership(const Automaton& a, const Word& w);

/// Closures of deterministic automata with at most one initial state over the same
/// alphabet. Throw InvalidArgument otherwise.
Automaton intersect(const Automaton& a1, const Automaton& a2);
Automaton complement(const Automaton& a);
Automaton unite(const Automaton& a1, const Automaton& a2);

/// The glued non-emptiness formula of intersect(a1, complement(a2)).
presburger::Formula inclusion_formula(const Automaton& a1, const Automaton& a2);

bool includes(const Automaton& a1, const Automaton& a2);
bool is_universal(const Automaton& a);
bool equivalent(const Automaton& a1, const Automaton& a2);

}  // namespace twpa
