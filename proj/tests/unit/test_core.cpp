#include <doctest.h>

#include "figures.hpp"
#include "twpa/automaton.hpp"
#include "twpa/constructions.hpp"
#include "twpa/error.hpp"
#include "twpa/format.hpp"
#include "twpa/presburger/syntax.hpp"
#include "twpa/run.hpp"

using namespace twpa;
using twpa::testing::figure_run;

namespace {

Condition violated(const Automaton& a) {
  try {
    validate(a);
  } catch (const ValidationError& e) {
    return e.condition();
  }
  FAIL("expected a validation error");
  return Condition::kArity;
}

// Two states and a single-dimension constraint, for validation checks.
Automaton tiny() {
  Automaton a({"a"}, 0);
  a.add_state("p", Direction::kRight, true);
  a.add_state("f", Direction::kRight, false, true, true);
  return a;
}

}  // namespace

TEST_CASE("validate accepts the example automata") {
  CHECK_NOTHROW(validate(build_multiplication()));
  CHECK_NOTHROW(validate(build_sweep()));
  for (std::size_t n = 0; n <= 4; ++n) CHECK_NOTHROW(validate(build_mismatch(n)));
}

TEST_CASE("validate reports each violated condition") {
  SUBCASE("condition 1") {
    Automaton a = tiny();
    a.add_transition(1, 0, 0);
    CHECK(violated(a) == Condition::kHaltingSource);
  }
  SUBCASE("condition 2, BEGIN between left states") {
    Automaton a = tiny();
    StateId l1 = a.add_state("l1", Direction::kLeft);
    StateId l2 = a.add_state("l2", Direction::kLeft);
    a.add_transition(l1, kBegin, l2);
    CHECK(violated(a) == Condition::kMovement);
  }
  SUBCASE("condition 2, END into a right non-accepting state") {
    Automaton a = tiny();
    StateId r = a.add_state("r", Direction::kRight);
    a.add_transition(0, kEnd, r);
    CHECK(violated(a) == Condition::kMovement);
  }
  SUBCASE("condition 3") {
    Automaton a = tiny();
    a.add_transition(0, 0, 1);
    CHECK(violated(a) == Condition::kHaltingEntry);
  }
  SUBCASE("initial left state") {
    Automaton a = tiny();
    a.add_state("l", Direction::kLeft, true);
    CHECK(violated(a) == Condition::kPartition);
  }
  SUBCASE("accepting but not halting") {
    Automaton a = tiny();
    a.add_state("x", Direction::kRight, false, false, true);
    CHECK(violated(a) == Condition::kPartition);
  }
  SUBCASE("weight arity") {
    Automaton a = tiny();
    a.add_transition(0, kEnd, 1, {Int(1)});
    CHECK(violated(a) == Condition::kArity);
  }
  SUBCASE("constraint arity") {
    Automaton a = tiny();
    a.set_constraint(presburger::parse_formula("x1 = 0"));
    CHECK(violated(a) == Condition::kArity);
  }
  SUBCASE("message names the state") {
    Automaton a = tiny();
    a.add_transition(1, 0, 0);
    CHECK_THROWS_WITH_AS(validate(a), doctest::Contains("f"), ValidationError);
  }
}

TEST_CASE("step") {
  Automaton mult = build_multiplication();
  Word w = parse_word(mult, "a#a#a");
  auto succ = step(mult, w, {0, *mult.find_state("q0")});
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].second == Configuration{1, *mult.find_state("q1")});
  CHECK(mult.transition(succ[0].first).symbol == kBegin);
  CHECK(mult.transition(succ[0].first).weight == zero_vector(2));

  CHECK(step(mult, w, {7, *mult.find_state("q4")}).empty());
  CHECK_THROWS_AS(step(mult, w, {8, 0}), InvalidArgument);

  // a left-reading state consumes the letter on its left
  auto back = step(mult, w, {3, *mult.find_state("q5")});
  REQUIRE(back.size() == 1);
  CHECK(back[0].second.position == 2);

  Automaton sweep = build_sweep();
  Word ab = parse_word(sweep, "ab");
  for (std::size_t pos = 0; pos <= 4; ++pos)
    for (StateId q = 0; q < sweep.num_states(); ++q) CHECK(step(sweep, ab, {pos, q}).size() <= 1);
}

TEST_CASE("accepts_oracle on the examples") {
  Automaton mult = build_multiplication();
  CHECK(accepts_oracle(mult, parse_word(mult, "aa#aaa#aaaaaa"), 200) == Verdict::kAccepted);
  Verdict r = accepts_oracle(mult, parse_word(mult, "aa#aaa#aaaaa"), 200);
  CHECK(r != Verdict::kAccepted);
  CHECK(accepts_oracle(mult, parse_word(mult, "a#a#a"), 100) == Verdict::kAccepted);
  CHECK(accepts_oracle(mult, parse_word(mult, "a#a#aa"), 100) != Verdict::kAccepted);
  CHECK(accepts_oracle(mult, parse_word(mult, "#a#"), 100) == Verdict::kAccepted);

  Automaton l1 = build_mismatch(1);
  CHECK(accepts_oracle(l1, parse_word(l1, "a#bc"), 0) == Verdict::kAccepted);
  CHECK(accepts_oracle(l1, parse_word(l1, "#bc"), 0) == Verdict::kRejected);
  CHECK(accepts_oracle(l1, parse_word(l1, "#"), 0) == Verdict::kAccepted);

  // a short bound on a nondeterministic machine is reported as such
  CHECK(accepts_oracle(mult, parse_word(mult, "aa#aaa#aaaaa"), 3) == Verdict::kBoundExhausted);
}

TEST_CASE("deterministic simulation detects loops") {
  Automaton a({"a"}, 0);
  StateId r = a.add_state("r", Direction::kRight, true);
  StateId l = a.add_state("l", Direction::kLeft);
  a.add_state("f", Direction::kRight, false, true, true);
  a.add_transition(r, 0, l);
  a.add_transition(l, 0, r);
  validate(a);
  CHECK(is_deterministic(a));
  CHECK(accepts_oracle(a, parse_word(a, "a"), 0) == Verdict::kRejected);
}

TEST_CASE("dimension 0 with a true constraint is plain two-way acceptance") {
  Automaton sweep = build_sweep();
  Automaton plain({"a", "b"}, 0);
  for (const auto& s : sweep.states()) plain.add_state(s.name, s.direction, s.initial, s.halting, s.accepting);
  for (const auto& t : sweep.transitions()) plain.add_transition(t.from, t.symbol, t.to);
  validate(plain);
  CHECK(language_sample(plain, 4, 100).size() == all_words(2, 4).size());
}

TEST_CASE("language_sample") {
  Automaton none = tiny();
  Automaton no_accept({"a"}, 0);
  no_accept.add_state("p", Direction::kRight, true);
  no_accept.add_state("h", Direction::kRight, false, true, false);
  no_accept.add_transition(0, 0, 0);
  no_accept.add_transition(0, kEnd, 1);
  CHECK(language_sample(no_accept, 4, 50).empty());

  Automaton l0 = build_mismatch(0);
  CHECK(language_sample(l0, 1, 50) == std::set<Word>{parse_word(l0, "#")});

  Automaton sweep = build_sweep();
  CHECK(language_sample(sweep, 2, 50) ==
        std::set<Word>{Word{}, parse_word(sweep, "ab"), parse_word(sweep, "ba")});
}

TEST_CASE("all_words is shortlex") {
  auto ws = all_words(2, 2);
  REQUIRE(ws.size() == 7);
  CHECK(ws[0].empty());
  CHECK(ws[1] == Word{0});
  CHECK(ws[3] == Word{0, 0});
  CHECK(ws[6] == Word{1, 1});
}

TEST_CASE("max_visits") {
  CHECK(max_visits(Run{}) == 0);

  Automaton one({"a"}, 0);
  one.add_state("p", Direction::kRight, true);
  one.add_state("f", Direction::kRight, false, true, true);
  one.add_transition(0, kBegin, 0);
  one.add_transition(0, 0, 0);
  one.add_transition(0, kEnd, 1);
  auto runs = accepting_runs(one, parse_word(one, "aaa"), 20);
  REQUIRE(runs.size() == 1);
  CHECK(max_visits(runs[0]) == 1);

  // The figure's run sits at the boundary between a and b five times: q3, q5, q9, q11, q13.
  auto fig = figure_run();
  CHECK(fig.run.trace.size() == 14);
  CHECK(fig.run.last() == Configuration{4, 14});
  CHECK(is_accepting_run(fig.automaton, fig.run));
  CHECK(max_visits(fig.run) == 5);
}

TEST_CASE("check_k_visit") {
  Automaton sweep = build_sweep();
  CHECK_FALSE(check_k_visit(sweep, sweep.num_states(), 5, 200).has_value());
  CHECK_FALSE(check_k_visit(sweep, 3, 5, 200).has_value());
  CHECK(check_k_visit(sweep, 2, 2, 200).has_value());

  Automaton mult = build_multiplication();
  auto cex = check_k_visit(mult, 3, 6, 200);
  REQUIRE(cex.has_value());
  CHECK(max_visits(*cex) > 3);
  CHECK(is_accepting_run(mult, *cex));

  Automaton one({"a", "b"}, 0);
  one.add_state("p", Direction::kRight, true);
  one.add_state("f", Direction::kRight, false, true, true);
  one.add_transition(0, kBegin, 0);
  one.add_transition(0, 0, 0);
  one.add_transition(0, 1, 0);
  one.add_transition(0, kEnd, 1);
  CHECK_FALSE(check_k_visit(one, 1, 5, 50).has_value());
}

TEST_CASE("is_deterministic") {
  CHECK(is_deterministic(build_mismatch(2)));
  CHECK_FALSE(is_deterministic(build_multiplication()));
  CHECK(is_deterministic(tiny()));
}

TEST_CASE("runs replay and values sum the trace") {
  Automaton mult = build_multiplication();
  for (const char* text : {"a#a#a", "aa#a#aa", "#aa#"}) {
    Word w = parse_word(mult, text);
    for (const Run& r : accepting_runs(mult, w, 60, false, 20)) {
      Run again = replay(mult, w, r.configurations.front(), r.trace);
      CHECK(again.configurations == r.configurations);
      CHECK(again.value == r.value);
      Vector sum = zero_vector(2);
      for (auto it = r.trace.rbegin(); it != r.trace.rend(); ++it) sum += mult.transition(*it).weight;
      CHECK(sum == r.value);
    }
  }
}

TEST_CASE("accepting runs of deterministic automata repeat no configuration") {
  Automaton l2 = build_mismatch(2);
  for (const Word& w : all_words(4, 5)) {
    for (const Run& r : accepting_runs(l2, w, 400, true)) {
      std::set<Configuration> seen(r.configurations.begin(), r.configurations.end());
      CHECK(seen.size() == r.configurations.size());
      CHECK(max_visits(r) <= l2.num_states());
    }
  }
}

TEST_CASE("text format") {
  SUBCASE("round trip") {
    for (const Automaton& a : {build_multiplication(), build_sweep(), build_mismatch(2)}) {
      std::string text = print_automaton(a);
      Automaton b = parse_automaton(text);
      CHECK(print_automaton(b) == text);
      CHECK_NOTHROW(validate(b));
      CHECK(language_sample(a, 4, 60) == language_sample(b, 4, 60));
    }
  }
  SUBCASE("example file") {
    Automaton a = parse_automaton(
        "alphabet a b #\n"
        "dim 2\n"
        "state q0 R initial\n"
        "state q1 R\n"
        "state q5 L\n"
        "state qf R halting accepting\n"
        "trans q0 BEGIN q1 (0,0)\n"
        "trans q1 a q1 (1,0)   // count\n"
        "trans q1 END qf (0,0)\n"
        "constraint: exists y. x1 = y + y /\\ x2 <= x1\n");
    CHECK(a.num_states() == 4);
    CHECK(a.dimension() == 2);
    CHECK(a.is_left(*a.find_state("q5")));
    CHECK(accepts_oracle(a, parse_word(a, "aa"), 0) == Verdict::kAccepted);
    CHECK(accepts_oracle(a, parse_word(a, "a"), 0) == Verdict::kRejected);
  }
  SUBCASE("errors carry the line") {
    try {
      parse_automaton("alphabet a\ndim 1\nstate q0 X\n");
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_automaton("alphabet a\ndim 1\nstate q0 R initial\ntrans q0 z q0 (0)\n"), ParseError);
    CHECK_THROWS_AS(parse_automaton("alphabet a\ndim 1\nstate q0 R\ntrans q0 a q0 (0,1)\n"), ParseError);
  }
}

TEST_CASE("words") {
  Automaton a = build_multiplication();
  CHECK(word_to_string(a, parse_word(a, "a#a")) == "a#a");
  CHECK(parse_word(a, "").empty());
  CHECK(parse_word(a, "eps").empty());
  CHECK(tape(parse_word(a, "a")) == Word{kBegin, 0, kEnd});
  CHECK_THROWS(parse_word(a, "ab"));
}
