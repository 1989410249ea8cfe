#pragma once

#include "twpa/automaton.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace twpa {

/// Head position (number of tape letters to its left, 0..|w|+2) and state.
struct Configuration {
  std::size_t position = 0;
  StateId state = 0;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

struct Run {
  Word word;
  std::vector<Configuration> configurations;  // one more than the trace
  std::vector<TransitionId> trace;
  Vector value;

  std::size_t length() const { return trace.size(); }
  const Configuration& last() const { return configurations.back(); }
};

/// The one-step successors of c on the given word; empty from halting states.
/// Throws InvalidArgument when the position is outside [0, |w|+2].
std::vector<std::pair<TransitionId, Configuration>> step(const Automaton& a, const Word& word,
                                                         const Configuration& c);

/// Rebuilds the run obtained by firing trace from start; throws InvalidArgument when a
/// transition cannot fire.
Run replay(const Automaton& a, const Word& word, const Configuration& start, const std::vector<TransitionId>& trace);

/// Initial configuration, halting in an accepting state.
bool is_accepting_run(const Automaton& a, const Run& r);

/// Evaluates the acceptance constraint on a value, memoizing results per automaton.
class ConstraintCache {
 public:
  explicit ConstraintCache(const Automaton& a) : psi_(a.constraint()), dim_(a.dimension()) {}
  bool operator()(const Vector& value);

 private:
  presburger::Formula psi_;
  std::size_t dim_;
  std::map<Vector, bool> memo_;
};

enum class Verdict : std::uint8_t { kAccepted, kRejected, kBoundExhausted };

const char* to_string(Verdict v);

/// Reference acceptance. Deterministic automata are simulated with loop detection and the
/// verdict is exact; otherwise (configuration, value) pairs are explored breadth first up
/// to step_bound transitions.
Verdict accepts_oracle(const Automaton& a, const Word& word, std::size_t step_bound);

/// Every word over the alphabet of length at most max_len, shortlex ordered.
std::vector<Word> all_words(std::size_t num_letters, std::size_t max_len);

/// Words of length <= max_len accepted by accepts_oracle.
std::set<Word> language_sample(const Automaton& a, std::size_t max_len, std::size_t step_bound);

/// Largest number of configurations of r sharing a head position.
std::size_t max_visits(const Run& r);

/// Accepting runs on word with at most step_bound transitions, in depth-first order.
/// When with_constraint is set the value must also satisfy the constraint. Stops after limit runs.
std::vector<Run> accepting_runs(const Automaton& a, const Word& word, std::size_t step_bound,
                                bool with_constraint = false, std::size_t limit = SIZE_MAX);

/// Searches accepting runs on words up to max_len for one that visits a position more
/// than k times. nullopt means no counterexample within the bounds.
std::optional<Run> check_k_visit(const Automaton& a, std::size_t k, std::size_t max_len, std::size_t step_bound);

}  // namespace twpa
