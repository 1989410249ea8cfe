#include <doctest.h>

#include "corpus.hpp"
#include "figures.hpp"
#include "twpa/constructions.hpp"
#include "twpa/crossing.hpp"
#include "twpa/error.hpp"

#include <algorithm>

using namespace twpa;
using twpa::testing::figure_run;

namespace {

std::vector<StateId> states(const Automaton& a, std::initializer_list<const char*> names) {
  std::vector<StateId> out;
  for (const char* n : names) out.push_back(*a.find_state(n));
  return out;
}

// One-way automaton over {a, b} accepting everything, counting a.
Automaton counter() {
  Automaton a({"a", "b"}, 1);
  StateId p = a.add_state("p", Direction::kRight, true);
  StateId f = a.add_state("f", Direction::kRight, false, true, true);
  a.add_transition(p, kBegin, p);
  a.add_transition(p, 0, p, {Int(1)});
  a.add_transition(p, 1, p);
  a.add_transition(p, kEnd, f);
  return a;
}

}  // namespace

TEST_CASE("anchorages of the figure's a-section") {
  auto fig = figure_run();
  const Automaton& a = fig.automaton;
  auto sections = crossing_sections_of(a, fig.run);
  REQUIRE(sections.size() == 4);
  const CrossingSection& c = sections[1];
  CHECK(c.symbol == 0);
  // (q2,a,q3)(q3,a,q4)(q4,a,q5)(q11,a,q12)(q12,a,q13)
  CHECK(c.transitions == std::vector<TransitionId>{1, 2, 3, 10, 11});
  CHECK(anchorage(a, c, Side::kLeft) == states(a, {"q2"}));
  CHECK(anchorage(a, c, Side::kRight) == states(a, {"q5", "q11", "q13"}));
  CHECK(section_name(a, c) == "[q2,a,q3;q3,a,q4;q4,a,q5;q11,a,q12;q12,a,q13]");
  for (std::size_t i = 0; i + 1 < sections.size(); ++i) CHECK(is_matching(a, sections[i], sections[i + 1]));
  CHECK(is_initial(a, sections.front()));
  CHECK(is_accepting(a, sections.back()));
  CHECK(merge(a, sections, fig.run.word).trace == fig.run.trace);
}

TEST_CASE("singleton sections") {
  Automaton a = counter();
  CrossingSection c{0, {1}};
  CHECK(anchorage(a, c, Side::kLeft) == std::vector<StateId>{0});
  CHECK(anchorage(a, c, Side::kRight) == std::vector<StateId>{0});
  CHECK(is_matching(a, CrossingSection{0, {1}}, CrossingSection{1, {2}}));

  Automaton b({"a", "b"}, 0);
  StateId p = b.add_state("p", Direction::kRight, true);
  StateId q = b.add_state("q", Direction::kRight);
  StateId r = b.add_state("r", Direction::kRight);
  b.add_transition(p, 0, q);
  b.add_transition(r, 1, p);
  CHECK_FALSE(is_matching(b, CrossingSection{0, {0}}, CrossingSection{1, {1}}));

  CHECK_THROWS_AS(anchorage(a, CrossingSection{1, {1}}, Side::kLeft), InvalidArgument);
  CHECK_THROWS_AS(anchorage(a, CrossingSection{0, {}}, Side::kLeft), InvalidArgument);
}

TEST_CASE("crossing sections of runs") {
  Automaton one = counter();
  Word w = parse_word(one, "abba");
  auto runs = accepting_runs(one, w, 20);
  REQUIRE(runs.size() == 1);
  auto cs = crossing_sections_of(one, runs[0]);
  CHECK(cs.size() == w.size() + 2);
  for (const auto& c : cs) CHECK(c.length() == 1);

  Automaton sweep = build_sweep();
  Word ab = parse_word(sweep, "ab");
  auto sr = accepting_runs(sweep, ab, 50);
  REQUIRE(sr.size() == 1);
  auto ss = crossing_sections_of(sweep, sr[0]);
  REQUIRE(ss.size() == 4);
  CHECK(ss[1].length() == 3);
  CHECK(ss[2].length() == 3);
  for (const auto& c : ss) {
    CHECK(is_well_formed(sweep, c));
    CHECK(c.length() <= max_visits(sr[0]));
  }
  Vector total = zero_vector(2);
  for (const auto& c : ss) total += section_value(sweep, c);
  CHECK(total == sr[0].value);
}

TEST_CASE("merge rejects broken chains") {
  Automaton sweep = build_sweep();
  Word ab = parse_word(sweep, "ab");
  auto r = accepting_runs(sweep, ab, 50).at(0);
  auto cs = crossing_sections_of(sweep, r);
  CHECK(merge(sweep, cs, ab).trace == r.trace);
  auto broken = cs;
  std::swap(broken[1], broken[2]);
  CHECK_THROWS_AS(merge(sweep, broken, ab), InvalidArgument);
  cs.pop_back();
  CHECK_THROWS_AS(merge(sweep, cs, ab), InvalidArgument);
}

TEST_CASE("merge inverts crossing_sections_of on the corpus") {
  for (const auto& s : testing::sweeper_corpus(7, 40)) {
    const Automaton& a = s.automaton;
    for (const Word& w : all_words(a.num_letters(), 4)) {
      for (const Run& r : accepting_runs(a, w, 60, false, 8)) {
        auto cs = crossing_sections_of(a, r);
        Run back = merge(a, cs, w);
        CHECK(back.trace == r.trace);
        Vector sum = zero_vector(a.dimension());
        for (const auto& c : cs) sum += section_value(a, c);
        CHECK(sum == r.value);
      }
    }
  }
}

TEST_CASE("to_one_way preserves the language") {
  SUBCASE("one-way input") {
    Automaton a = counter();
    auto conv = to_one_way(a, 1);
    CHECK(is_one_way(conv.automaton));
    CHECK_NOTHROW(validate(conv.automaton));
    CHECK(language_sample(a, 5, 50) == language_sample(conv.automaton, 5, 50));
    for (const auto& c : conv.sections) CHECK(c.length() == 1);
  }
  SUBCASE("sweep") {
    Automaton sweep = build_sweep();
    auto conv = to_one_way(sweep, 3);
    CHECK_NOTHROW(validate(conv.automaton));
    CHECK(language_sample(sweep, 5, 100) == language_sample(conv.automaton, 5, 100));
    // too small a bound under-approximates
    auto small = to_one_way(sweep, 2);
    CHECK(language_sample(small.automaton, 5, 100).empty());
  }
  SUBCASE("corpus") {
    for (const auto& s : testing::sweeper_corpus(11, 30)) {
      auto conv = to_one_way(s.automaton, s.k);
      CHECK_NOTHROW(validate(conv.automaton));
      CHECK(language_sample(s.automaton, 4, 80) == language_sample(conv.automaton, 4, 80));
    }
  }
  CHECK_THROWS_AS(to_one_way(counter(), 0), InvalidArgument);
}

TEST_CASE("deterministic inputs convert to unambiguous automata") {
  for (const auto& s : testing::deterministic_corpus(5, 20)) {
    auto conv = to_one_way(s.automaton, s.k);
    for (const Word& w : all_words(2, 4)) CHECK(accepting_runs(conv.automaton, w, 20).size() <= 1);
  }
}

TEST_CASE("state count bound") {
  for (const auto& s : testing::sweeper_corpus(13, 30)) {
    auto conv = to_one_way(s.automaton, s.k);
    std::size_t delta = s.automaton.transitions().size(), bound = 1, power = 1;
    for (std::size_t l = 1; l <= s.k; ++l) bound += power *= delta;
    CHECK(conv.automaton.num_states() <= bound);
  }
}

TEST_CASE("emptiness-preserving conversion") {
  Automaton sweep = build_sweep();
  auto conv = to_one_way_emptiness(sweep, 3);
  CHECK_NOTHROW(validate(conv.automaton));
  REQUIRE(conv.pad.has_value());
  CHECK(conv.automaton.alphabet().back() == "#");
  auto padded = language_sample(conv.automaton, 7, 100);
  CHECK(padded.count(parse_word(conv.automaton, "#####")) == 0);
  // epsilon becomes two pads after BEGIN, two before END, nothing in between
  CHECK(padded.count(parse_word(conv.automaton, "####")) == 1);
  for (const Word& w : padded) {
    Word e = erase_pad(conv, w);
    CHECK(accepts_oracle(sweep, e, 0) == Verdict::kAccepted);
  }

  Automaton one = counter();
  auto plain = to_one_way(one, 1);
  auto emp = to_one_way_emptiness(one, 1);
  CHECK(plain.automaton.num_states() == emp.automaton.num_states());
  CHECK(plain.automaton.transitions().size() == emp.automaton.transitions().size());

  Automaton hash({"#"}, 0);
  hash.add_state("p", Direction::kRight, true);
  auto h = to_one_way_emptiness(hash, 1);
  CHECK(h.automaton.alphabet().back() == "#1");
}

TEST_CASE("emptiness conversion keeps weights and verdicts on the corpus") {
  for (const auto& s : testing::sweeper_corpus(17, 30)) {
    const Automaton& a = s.automaton;
    auto conv = to_one_way_emptiness(a, s.k);
    std::set<Vector> weights;
    for (const auto& t : a.transitions()) weights.insert(t.weight);
    for (const auto& t : conv.automaton.transitions()) CHECK(weights.count(t.weight) == 1);
    // a word of length 1 has three cells, each padded by at most k - 1 = 2
    auto padded = language_sample(conv.automaton, 7, 200);
    if (!language_sample(a, 1, 60).empty()) CHECK_FALSE(padded.empty());
    for (const Word& w : padded) CHECK(accepts_oracle(a, erase_pad(conv, w), 60) == Verdict::kAccepted);
  }
}
