#pragma once

#include "twpa/automaton.hpp"

#include <string>
#include <string_view>

namespace twpa {

/// Reads the line-oriented .2pa text format:
///
///   alphabet a b #
///   dim 2
///   state q0 R initial
///   state qf R halting accepting
///   trans q0 BEGIN q1 (0,0)
///   constraint: x1 = x2
///
/// "//" starts a comment. The result is not validated. Throws ParseError with the line.
Automaton parse_automaton(std::string_view text, const std::string& source = {});
Automaton load_automaton(const std::string& path);

/// Writes the .2pa format; parse_automaton(print_automaton(a)) rebuilds a.
std::string print_automaton(const Automaton& a);
void save_automaton(const Automaton& a, const std::string& path);

}  // namespace twpa
