#pragma once

#include "twpa/automaton.hpp"
#include "twpa/run.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twpa {

/// The transitions of a run that consume one tape cell, in trace order.
struct CrossingSection {
  Symbol symbol = 0;
  std::vector<TransitionId> transitions;

  std::size_t length() const { return transitions.size(); }
  friend bool operator==(const CrossingSection&, const CrossingSection&) = default;
  friend auto operator<=>(const CrossingSection&, const CrossingSection&) = default;
};

enum class Side : std::uint8_t { kLeft, kRight };

/// Alternating reading directions, R-reading first source and last target, all
/// transitions on the section's symbol.
bool is_well_formed(const Automaton& a, const CrossingSection& c);

/// Throws InvalidArgument when c is not well formed.
std::vector<StateId> anchorage(const Automaton& a, const CrossingSection& c, Side side);

Vector section_value(const Automaton& a, const CrossingSection& c);

/// R-anchorage of c1 equals the L-anchorage of c2.
bool is_matching(const Automaton& a, const CrossingSection& c1, const CrossingSection& c2);
/// BEGIN section whose L-anchorage is a single initial state.
bool is_initial(const Automaton& a, const CrossingSection& c);
/// END section whose R-anchorage is a single accepting state.
bool is_accepting(const Automaton& a, const CrossingSection& c);

/// "[p,a,q;...]" using state and symbol names.
std::string section_name(const Automaton& a, const CrossingSection& c);

/// One section per cell of BEGIN w END.
std::vector<CrossingSection> crossing_sections_of(const Automaton& a, const Run& r);

/// Threads a matching chain of sections into the run it describes. Throws InvalidArgument
/// naming the first failing pair or step.
Run merge(const Automaton& a, const std::vector<CrossingSection>& sections, const Word& word);

/// Result of the crossing-section conversion. State i < sections.size() simulates
/// sections[i]; top is the accepting sink. The emptiness variant also has intermediate
/// states reading the pad letter.
struct Conversion {
  Automaton automaton;
  std::vector<CrossingSection> sections;
  StateId top = 0;
  std::optional<Symbol> pad;
};

/// One-way automaton equivalent to a when a is k-visit; otherwise it accepts the words
/// with a k-visit accepting run.
Conversion to_one_way(const Automaton& a, std::size_t k);

/// Like to_one_way, but a section of length l becomes the letter followed by l - 1 pad
/// letters (pads precede END), one transition per weight. Emptiness and the set of
/// weights are preserved.
Conversion to_one_way_emptiness(const Automaton& a, std::size_t k);

/// The word with every pad letter removed, over the original alphabet.
Word erase_pad(const Conversion& c, const Word& w);

}  // namespace twpa
