#include "twpa/automaton.hpp"

#include "twpa/error.hpp"
#include "twpa/presburger/syntax.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twpa {

Automaton::Automaton(std::vector<std::string> alphabet, std::size_t dimension)
    : alphabet_(std::move(alphabet)), dimension_(dimension) {
  std::set<std::string> seen;
  for (const auto& a : alphabet_) {
    if (a.empty() || a == "BEGIN" || a == "END") throw InvalidArgument("reserved or empty letter '" + a + "'");
    if (!seen.insert(a).second) throw InvalidArgument("duplicate letter '" + a + "'");
  }
}

std::string Automaton::symbol_name(Symbol s) const {
  if (s == kBegin) return "BEGIN";
  if (s == kEnd) return "END";
  return alphabet_.at(static_cast<std::size_t>(s));
}

std::optional<Symbol> Automaton::find_symbol(std::string_view name) const {
  if (name == "BEGIN") return kBegin;
  if (name == "END") return kEnd;
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == name) return static_cast<Symbol>(i);
  return std::nullopt;
}

StateId Automaton::add_state(std::string name, Direction direction, bool initial, bool halting, bool accepting) {
  if (find_state(name)) throw InvalidArgument("duplicate state '" + name + "'");
  states_.push_back({std::move(name), direction, initial, halting, accepting});
  out_.emplace_back(alphabet_.size() + 2);
  return states_.size() - 1;
}

TransitionId Automaton::add_transition(StateId from, Symbol symbol, StateId to, Vector weight) {
  if (from >= states_.size() || to >= states_.size()) throw InvalidArgument("transition refers to an unknown state");
  if (symbol < kEnd || symbol >= static_cast<Symbol>(alphabet_.size()))
    throw InvalidArgument("transition reads an unknown symbol");
  if (weight.empty()) weight = zero_vector(dimension_);
  transitions_.push_back({from, symbol, to, std::move(weight)});
  out_[from][slot(symbol)].push_back(transitions_.size() - 1);
  return transitions_.size() - 1;
}

std::optional<StateId> Automaton::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].name == name) return i;
  return std::nullopt;
}

const std::vector<TransitionId>& Automaton::outgoing(StateId q, Symbol s) const { return out_[q][slot(s)]; }

std::vector<StateId> Automaton::initial_states() const {
  std::vector<StateId> out;
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].initial) out.push_back(i);
  return out;
}

Int Automaton::mu() const {
  Int m = 0;
  for (const auto& t : transitions_)
    for (const auto& x : t.weight)
      if (abs(x) > m) m = abs(x);
  return m;
}

void validate(const Automaton& a) {
  const auto& states = a.states();
  for (const auto& s : states) {
    if (s.initial && s.direction != Direction::kRight)
      throw ValidationError(Condition::kPartition, "initial state " + s.name + " is L-reading");
    if (s.accepting && !s.halting)
      throw ValidationError(Condition::kPartition, "accepting state " + s.name + " is not halting");
  }
  for (const auto& t : a.transitions()) {
    const State& p = states[t.from];
    const State& q = states[t.to];
    std::string what = "transition (" + p.name + ", " + a.symbol_name(t.symbol) + ", " + q.name + ")";
    if (t.weight.size() != a.dimension())
      throw ValidationError(Condition::kArity, what + " has a weight of length " + std::to_string(t.weight.size()));
    if (p.halting) throw ValidationError(Condition::kHaltingSource, what + " leaves halting state " + p.name);
    if (t.symbol == kBegin && p.direction == Direction::kLeft && q.direction == Direction::kLeft)
      throw ValidationError(Condition::kMovement, what + " moves left of BEGIN");
    if (t.symbol == kEnd && p.direction == Direction::kRight && q.direction == Direction::kRight && !q.accepting)
      throw ValidationError(Condition::kMovement, what + " moves right of END");
    if (q.halting && (p.direction != Direction::kRight || t.symbol != kEnd))
      throw ValidationError(Condition::kHaltingEntry, what + " enters halting state " + q.name + " without reading END");
  }
  auto dims = presburger::dim_vars(a.dimension());
  for (auto v : presburger::free_vars(a.constraint())) {
    if (std::find(dims.begin(), dims.end(), v) == dims.end())
      throw ValidationError(Condition::kArity, "constraint variable " + presburger::var_name(v) + " is not among x1..x" +
                                                   std::to_string(a.dimension()));
  }
}

bool is_deterministic(const Automaton& a) {
  for (StateId q = 0; q < a.num_states(); ++q) {
    if (a.outgoing(q, kBegin).size() > 1 || a.outgoing(q, kEnd).size() > 1) return false;
    for (Symbol s = 0; s < static_cast<Symbol>(a.num_letters()); ++s)
      if (a.outgoing(q, s).size() > 1) return false;
  }
  return true;
}

bool is_one_way(const Automaton& a) {
  return std::none_of(a.states().begin(), a.states().end(),
                      [](const State& s) { return s.direction == Direction::kLeft; });
}

Word tape(const Word& w) {
  Word t;
  t.reserve(w.size() + 2);
  t.push_back(kBegin);
  t.insert(t.end(), w.begin(), w.end());
  t.push_back(kEnd);
  return t;
}

namespace {

bool single_characters(const Automaton& a) {
  return std::all_of(a.alphabet().begin(), a.alphabet().end(), [](const std::string& s) { return s.size() == 1; });
}

}  // namespace

std::string word_to_string(const Automaton& a, const Word& w) {
  const bool compact = single_characters(a);
  std::string out;
  for (Symbol s : w) {
    if (!compact && !out.empty()) out += ' ';
    out += a.symbol_name(s);
  }
  return out;
}

Word parse_word(const Automaton& a, std::string_view text) {
  Word w;
  auto letter = [&](std::string_view tok) {
    auto s = a.find_symbol(tok);
    if (!s || *s < 0) throw InvalidArgument("'" + std::string(tok) + "' is not a letter");
    w.push_back(*s);
  };
  if (text.empty() || (text == "eps" && !a.find_symbol("eps"))) return w;
  if (text.find(' ') != std::string_view::npos || !single_characters(a)) {
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) letter(tok);
    return w;
  }
  for (char c : text) letter(std::string_view(&c, 1));
  return w;
}

}  // namespace twpa
