#include "twpa/crossing.hpp"

#include "twpa/error.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace twpa {

bool is_well_formed(const Automaton& a, const CrossingSection& c) {
  if (c.transitions.empty()) return false;
  for (std::size_t i = 0; i < c.length(); ++i) {
    if (c.transitions[i] >= a.transitions().size()) return false;
    const Transition& t = a.transition(c.transitions[i]);
    if (t.symbol != c.symbol) return false;
    if (a.is_right(t.from) != (i % 2 == 0)) return false;
  }
  StateId last = a.transition(c.transitions.back()).to;
  return a.is_right(last) || a.state(last).halting;
}

std::vector<StateId> anchorage(const Automaton& a, const CrossingSection& c, Side side) {
  if (!is_well_formed(a, c)) throw InvalidArgument("malformed crossing section " + section_name(a, c));
  auto p = [&](std::size_t i) { return a.transition(c.transitions[i]).from; };
  auto q = [&](std::size_t i) { return a.transition(c.transitions[i]).to; };
  const std::size_t n = c.length();
  std::vector<StateId> out;
  if (side == Side::kLeft) {
    out.push_back(p(0));
    for (std::size_t i = 1; i + 1 < n; i += 2) {
      if (q(i) == p(i + 1) && a.is_right(q(i))) continue;
      out.push_back(q(i));
      out.push_back(p(i + 1));
    }
  } else {
    for (std::size_t i = 0; i + 1 < n; i += 2) {
      if (q(i) == p(i + 1) && a.is_left(q(i))) continue;
      out.push_back(q(i));
      out.push_back(p(i + 1));
    }
    out.push_back(q(n - 1));
  }
  return out;
}

Vector section_value(const Automaton& a, const CrossingSection& c) {
  Vector v = zero_vector(a.dimension());
  for (TransitionId t : c.transitions) v += a.transition(t).weight;
  return v;
}

bool is_matching(const Automaton& a, const CrossingSection& c1, const CrossingSection& c2) {
  return anchorage(a, c1, Side::kRight) == anchorage(a, c2, Side::kLeft);
}

bool is_initial(const Automaton& a, const CrossingSection& c) {
  if (c.symbol != kBegin) return false;
  auto l = anchorage(a, c, Side::kLeft);
  return l.size() == 1 && a.state(l[0]).initial;
}

bool is_accepting(const Automaton& a, const CrossingSection& c) {
  if (c.symbol != kEnd) return false;
  auto r = anchorage(a, c, Side::kRight);
  return r.size() == 1 && a.state(r[0]).accepting;
}

std::string section_name(const Automaton& a, const CrossingSection& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.length(); ++i) {
    if (i) out += ";";
    if (c.transitions[i] >= a.transitions().size()) {
      out += "?";
      continue;
    }
    const Transition& t = a.transition(c.transitions[i]);
    out += a.state(t.from).name + "," + a.symbol_name(t.symbol) + "," + a.state(t.to).name;
  }
  return out + "]";
}

std::vector<CrossingSection> crossing_sections_of(const Automaton& a, const Run& r) {
  Word cells = tape(r.word);
  std::vector<CrossingSection> out(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) out[i].symbol = cells[i];
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const Configuration& c = r.configurations[i];
    std::size_t cell = a.is_right(c.state) ? c.position : c.position - 1;
    out[cell].transitions.push_back(r.trace[i]);
  }
  return out;
}

Run merge(const Automaton& a, const std::vector<CrossingSection>& sections, const Word& word) {
  Word cells = tape(word);
  if (sections.size() != cells.size())
    throw InvalidArgument("expected " + std::to_string(cells.size()) + " sections, got " +
                          std::to_string(sections.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (sections[i].symbol != cells[i] || !is_well_formed(a, sections[i]))
      throw InvalidArgument("section " + std::to_string(i) + " " + section_name(a, sections[i]) +
                            " is not a well-formed " + a.symbol_name(cells[i]) + "-section");
  }
  if (!is_initial(a, sections.front())) throw InvalidArgument("first section is not initial");
  if (!is_accepting(a, sections.back())) throw InvalidArgument("last section is not accepting");
  for (std::size_t i = 0; i + 1 < sections.size(); ++i)
    if (!is_matching(a, sections[i], sections[i + 1]))
      throw InvalidArgument("sections " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not match");

  std::vector<std::size_t> next(sections.size(), 0);
  std::vector<TransitionId> trace;
  Configuration c{0, a.transition(sections[0].transitions[0]).from};
  std::size_t total = 0;
  for (const auto& s : sections) total += s.length();
  while (trace.size() < total) {
    if (a.state(c.state).halting) break;
    std::size_t cell = a.is_right(c.state) ? c.position : c.position - 1;
    if (a.is_left(c.state) && c.position == 0) break;
    const CrossingSection& s = sections[cell];
    if (next[cell] == s.length()) break;
    TransitionId t = s.transitions[next[cell]];
    if (a.transition(t).from != c.state) break;
    ++next[cell];
    trace.push_back(t);
    c = {a.is_right(c.state) ? c.position + 1 : c.position - 1, a.transition(t).to};
  }
  if (trace.size() != total)
    throw InvalidArgument("sections do not thread into a single run (stuck after " + std::to_string(trace.size()) +
                          " transitions)");
  return replay(a, word, {0, a.transition(sections[0].transitions[0]).from}, trace);
}

namespace {

// Enumerates the sections on one symbol with a given L-anchorage. A head that leaves a
// transition on the side it will read from next must take that transition immediately,
// so only genuine excursions contribute to the anchorages.
class SectionGenerator {
 public:
  SectionGenerator(const Automaton& a, std::size_t k)
      : a_(a), k_(k), deterministic_(is_deterministic(a)), firing_(a.num_states(), false) {
    // An excursion to the right of a cell never reads BEGIN, so it returns through an
    // L-state reachable from where it started without BEGIN transitions.
    const std::size_t n = a.num_states();
    returns_.resize(n);
    for (StateId q = 0; q < n; ++q) {
      if (!a.is_right(q)) continue;
      std::vector<bool> seen(n, false);
      std::vector<StateId> work{q};
      seen[q] = true;
      while (!work.empty()) {
        StateId p = work.back();
        work.pop_back();
        for (const auto& t : a.transitions())
          if (t.from == p && t.symbol != kBegin && !seen[t.to]) {
            seen[t.to] = true;
            work.push_back(t.to);
          }
      }
      for (StateId p = 0; p < n; ++p)
        if (seen[p] && a.is_left(p)) returns_[q].push_back(p);
    }
  }

  const std::vector<CrossingSection>& sections(Symbol s, const std::vector<StateId>& left_anchorage) {
    auto key = std::make_pair(s, left_anchorage);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<CrossingSection> out;
    if (!left_anchorage.empty() && a_.is_right(left_anchorage[0])) {
      symbol_ = s;
      target_ = &left_anchorage;
      out_ = &out;
      current_.clear();
      extend(left_anchorage[0], 1);
    }
    return cache_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  // The head is about to fire a transition from p; matched counts the anchorage
  // entries consumed so far.
  void extend(StateId p, std::size_t matched) {
    if (current_.size() == k_) return;
    // a deterministic accepting run never fires twice from the same configuration
    if (deterministic_) {
      if (firing_[p]) return;
      firing_[p] = true;
    }
    fire(p, matched);
    if (deterministic_) firing_[p] = false;
  }

  void fire(StateId p, std::size_t matched) {
    for (TransitionId t : a_.outgoing(p, symbol_)) {
      current_.push_back(t);
      StateId q = a_.transition(t).to;
      if (a_.is_right(p)) {
        // head now on the right of the cell
        if (a_.state(q).halting) {
          if (matched == target_->size()) emit();
        } else if (a_.is_left(q)) {
          extend(q, matched);
        } else {
          if (matched == target_->size()) emit();
          if (symbol_ != kEnd)
            for (StateId back : returns_[q]) extend(back, matched);
        }
      } else {
        // head now on the left of the cell
        if (a_.is_right(q)) {
          extend(q, matched);
        } else if (symbol_ != kBegin && matched + 2 <= target_->size() && (*target_)[matched] == q &&
                   a_.is_right((*target_)[matched + 1])) {
          extend((*target_)[matched + 1], matched + 2);
        }
      }
      current_.pop_back();
    }
  }

  void emit() { out_->push_back(CrossingSection{symbol_, current_}); }

  const Automaton& a_;
  std::size_t k_;
  bool deterministic_;
  std::vector<bool> firing_;
  std::vector<std::vector<StateId>> returns_;
  std::map<std::pair<Symbol, std::vector<StateId>>, std::vector<CrossingSection>> cache_;

  Symbol symbol_ = 0;
  const std::vector<StateId>* target_ = nullptr;
  std::vector<CrossingSection>* out_ = nullptr;
  std::vector<TransitionId> current_;
};

std::string fresh_pad(const std::vector<std::string>& alphabet) {
  auto taken = [&](const std::string& s) { return std::find(alphabet.begin(), alphabet.end(), s) != alphabet.end(); };
  if (!taken("#")) return "#";
  for (std::size_t i = 1;; ++i)
    if (!taken("#" + std::to_string(i))) return "#" + std::to_string(i);
}

std::string unique_name(std::string name, std::map<std::string, std::size_t>& used) {
  auto [it, fresh] = used.emplace(name, 0);
  if (fresh) return name;
  return name + "'" + std::to_string(++it->second);
}

Conversion convert(const Automaton& a, std::size_t k, bool pad) {
  if (k < 1) throw InvalidArgument("visit bound k must be at least 1");
  std::vector<std::string> alphabet = a.alphabet();
  std::optional<Symbol> pad_symbol;
  if (pad) {
    alphabet.push_back(fresh_pad(alphabet));
    pad_symbol = static_cast<Symbol>(a.num_letters());
  }
  SectionGenerator gen(a, k);

  // forward reachability over sections
  std::vector<CrossingSection> sections;
  std::map<CrossingSection, std::size_t> index;
  std::vector<std::vector<std::size_t>> succ;
  std::deque<std::size_t> work;
  auto intern = [&](const CrossingSection& c) {
    auto [it, fresh] = index.emplace(c, sections.size());
    if (fresh) {
      sections.push_back(c);
      succ.emplace_back();
      work.push_back(it->second);
    }
    return it->second;
  };
  for (StateId q : a.initial_states())
    for (const auto& c : gen.sections(kBegin, {q})) intern(c);
  std::vector<std::size_t> initial(sections.size());
  for (std::size_t i = 0; i < initial.size(); ++i) initial[i] = i;
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    if (sections[i].symbol == kEnd) continue;
    auto right = anchorage(a, sections[i], Side::kRight);
    for (Symbol s = 0; s <= static_cast<Symbol>(a.num_letters()); ++s) {
      Symbol sym = s == static_cast<Symbol>(a.num_letters()) ? kEnd : s;
      for (const auto& c : gen.sections(sym, right)) {
        if (sym == kEnd && !is_accepting(a, c)) continue;
        std::size_t j = intern(c);
        succ[i].push_back(j);
      }
    }
  }

  // keep sections that can reach an accepting END section
  std::vector<std::vector<std::size_t>> pred(sections.size());
  for (std::size_t i = 0; i < sections.size(); ++i)
    for (std::size_t j : succ[i]) pred[j].push_back(i);
  std::vector<bool> live(sections.size(), false);
  std::deque<std::size_t> back;
  for (std::size_t i = 0; i < sections.size(); ++i)
    if (sections[i].symbol == kEnd) {
      live[i] = true;
      back.push_back(i);
    }
  while (!back.empty()) {
    std::size_t j = back.front();
    back.pop_front();
    for (std::size_t i : pred[j])
      if (!live[i]) {
        live[i] = true;
        back.push_back(i);
      }
  }
  std::vector<std::size_t> remap(sections.size(), SIZE_MAX);
  Conversion out;
  out.pad = pad_symbol;
  out.automaton = Automaton(alphabet, a.dimension());
  std::map<std::string, std::size_t> used;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (!live[i]) continue;
    remap[i] = out.sections.size();
    out.sections.push_back(sections[i]);
    bool init = std::find(initial.begin(), initial.end(), i) != initial.end();
    out.automaton.add_state(unique_name(section_name(a, sections[i]), used), Direction::kRight, init);
  }
  out.top = out.automaton.add_state(unique_name("TOP", used), Direction::kRight, false, true, true);

  std::size_t fresh = 0;
  auto add = [&](StateId from, Symbol letter, StateId to, const CrossingSection& c) {
    if (!pad || c.length() == 1) {
      out.automaton.add_transition(from, letter, to, section_value(a, c));
      return;
    }
    // the letter first, except END which has to come last
    std::vector<Symbol> reads(c.length(), *pad_symbol);
    if (letter == kEnd)
      reads.back() = kEnd;
    else
      reads.front() = letter;
    StateId cur = from;
    for (std::size_t i = 0; i < c.length(); ++i) {
      StateId nxt = to;
      if (i + 1 < c.length())
        nxt = out.automaton.add_state(unique_name("pad" + std::to_string(fresh++), used), Direction::kRight);
      out.automaton.add_transition(cur, reads[i], nxt, a.transition(c.transitions[i]).weight);
      cur = nxt;
    }
  };
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (!live[i]) continue;
    StateId from = remap[i];
    if (sections[i].symbol == kEnd) {
      add(from, kEnd, out.top, sections[i]);
      continue;
    }
    for (std::size_t j : succ[i])
      if (live[j]) add(from, sections[i].symbol, remap[j], sections[i]);
  }
  out.automaton.set_constraint(a.constraint());
  return out;
}

}  // namespace

Conversion to_one_way(const Automaton& a, std::size_t k) { return convert(a, k, false); }

Conversion to_one_way_emptiness(const Automaton& a, std::size_t k) { return convert(a, k, true); }

Word erase_pad(const Conversion& c, const Word& w) {
  Word out;
  for (Symbol s : w)
    if (!c.pad || s != *c.pad) out.push_back(s);
  return out;
}

}  // namespace twpa
