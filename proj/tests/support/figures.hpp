#pragma once

#include "twpa/automaton.hpp"
#include "twpa/run.hpp"

namespace twpa::testing {

/// The two-way run over BEGIN a b END drawn in the crossing-section figure: states
/// q1..q15 (q3, q7, q8, q10, q11 left-reading), transition i fires v_i.
struct FigureRun {
  Automaton automaton;
  Run run;
};

FigureRun figure_run();

}  // namespace twpa::testing
