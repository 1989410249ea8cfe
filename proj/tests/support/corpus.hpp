#pragma once

#include "twpa/automaton.hpp"

#include <random>
#include <string>
#include <vector>

namespace twpa::testing {

struct SweeperShape {
  std::size_t letters = 2;
  std::size_t dimension = 2;
  bool deterministic = true;
};

struct Sweeper {
  Automaton automaton;
  /// Visit bound guaranteed by construction: 1 for single-pass machines, 3 otherwise.
  std::size_t k = 1;
};

/// Random sweeping 2PA with at most four states: either one rightward pass over up to
/// three states, or right / left / right passes with one state each. Weights in {-1,0,1}.
Sweeper random_sweeper(std::mt19937& rng, const SweeperShape& shape);

/// Random one-way automaton with up to max_states non-halting states.
Automaton random_one_way(std::mt19937& rng, std::size_t letters, std::size_t dimension, std::size_t max_states,
                         bool deterministic);

/// Random constraint over x1..xd: one or two linear atoms with coefficients in
/// {-1,0,1}, sometimes a parity condition.
presburger::Formula random_constraint(std::mt19937& rng, std::size_t dimension);

/// Mixed corpus of deterministic and nondeterministic sweepers, |alphabet| <= 2, d <= 2.
std::vector<Sweeper> sweeper_corpus(std::uint32_t seed, std::size_t count);

/// Deterministic sweepers over {a, b}.
std::vector<Sweeper> deterministic_corpus(std::uint32_t seed, std::size_t count);

}  // namespace twpa::testing
