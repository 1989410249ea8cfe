#pragma once

#include "twpa/integer.hpp"
#include "twpa/presburger/formula.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twpa {

/// Letters are indices into the alphabet; the endmarkers are negative.
using Symbol = int;
inline constexpr Symbol kBegin = -1;  // left endmarker
inline constexpr Symbol kEnd = -2;    // right endmarker

using Word = std::vector<Symbol>;
using StateId = std::size_t;
using TransitionId = std::size_t;

/// R-reading states consume the letter right of the head and move right; L-reading
/// states consume the letter on the left and move left.
enum class Direction : std::uint8_t { kRight, kLeft };

struct State {
  std::string name;
  Direction direction = Direction::kRight;
  bool initial = false;
  bool halting = false;
  bool accepting = false;
};

struct Transition {
  StateId from = 0;
  Symbol symbol = 0;
  StateId to = 0;
  Vector weight;
};

/// A two-way Parikh automaton. Built incrementally, then checked with validate().
class Automaton {
 public:
  Automaton() = default;
  Automaton(std::vector<std::string> alphabet, std::size_t dimension);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t num_letters() const { return alphabet_.size(); }

  /// "BEGIN", "END" or the letter.
  std::string symbol_name(Symbol s) const;
  /// Accepts letters and BEGIN / END.
  std::optional<Symbol> find_symbol(std::string_view name) const;

  StateId add_state(std::string name, Direction direction, bool initial = false, bool halting = false,
                    bool accepting = false);
  /// Weight defaults to the zero vector.
  TransitionId add_transition(StateId from, Symbol symbol, StateId to, Vector weight = {});
  void set_constraint(presburger::Formula psi) { constraint_ = std::move(psi); }

  std::size_t num_states() const { return states_.size(); }
  const State& state(StateId q) const { return states_[q]; }
  const std::vector<State>& states() const { return states_; }
  std::optional<StateId> find_state(std::string_view name) const;
  bool is_right(StateId q) const { return states_[q].direction == Direction::kRight; }
  bool is_left(StateId q) const { return states_[q].direction == Direction::kLeft; }

  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition& transition(TransitionId t) const { return transitions_[t]; }
  /// Transitions leaving q on symbol s.
  const std::vector<TransitionId>& outgoing(StateId q, Symbol s) const;

  std::vector<StateId> initial_states() const;
  const presburger::Formula& constraint() const { return constraint_; }

  /// Largest absolute weight entry.
  Int mu() const;

 private:
  std::size_t slot(Symbol s) const { return static_cast<std::size_t>(s + 2); }

  std::vector<std::string> alphabet_;
  std::size_t dimension_ = 0;
  std::vector<State> states_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::vector<TransitionId>>> out_;  // [state][symbol + 2]
  presburger::Formula constraint_;
};

/// Throws ValidationError naming the first violated structural condition.
void validate(const Automaton& a);

/// At most one transition per state and symbol.
bool is_deterministic(const Automaton& a);

/// No L-reading states.
bool is_one_way(const Automaton& a);

/// Letters of w followed by the endmarkers: the tape BEGIN w END.
Word tape(const Word& w);

/// Rendering of a word: letters joined directly when all are single characters,
/// otherwise separated by spaces.
std::string word_to_string(const Automaton& a, const Word& w);

/// Inverse of word_to_string; "" and "eps" denote the empty word.
Word parse_word(const Automaton& a, std::string_view text);

}  // namespace twpa
