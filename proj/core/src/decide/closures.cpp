#include "twpa/crossing.hpp"
#include "twpa/decide.hpp"
#include "twpa/error.hpp"
#include "twpa/presburger/linear.hpp"

#include <algorithm>
#include <map>

namespace twpa {

using presburger::Formula;
using presburger::LinearExpr;
using presburger::dim_var;

namespace {

void require_closable(const Automaton& a) {
  if (!is_deterministic(a)) throw InvalidArgument("closure operations need a deterministic automaton");
  if (a.initial_states().size() > 1) throw InvalidArgument("closure operations need at most one initial state");
}

void require_same_alphabet(const Automaton& a1, const Automaton& a2) {
  if (a1.alphabet() != a2.alphabet()) throw InvalidArgument("automata have different alphabets");
}

// The automaton without weights or constraint.
Automaton underlying(const Automaton& a) {
  Automaton out(a.alphabet(), 0);
  for (const auto& s : a.states()) out.add_state(s.name, s.direction, s.initial, s.halting, s.accepting);
  for (const auto& t : a.transitions()) out.add_transition(t.from, t.symbol, t.to);
  return out;
}

// Deterministic one-way recognizer of membership in the underlying languages of several
// automata at once: subset construction over their crossing-section conversions.
struct MembershipDfa {
  std::size_t start = 0;                      // state after reading BEGIN
  std::vector<std::vector<std::size_t>> next; // [state][letter]
  std::vector<std::vector<bool>> member;      // [state][automaton], decided at END
};

MembershipDfa membership_dfa(const std::vector<const Automaton*>& automata, std::size_t letters) {
  std::vector<Automaton> ones;
  for (const Automaton* a : automata) ones.push_back(to_one_way(underlying(*a), default_visit_bound(*a)).automaton);
  using Subsets = std::vector<std::vector<StateId>>;
  std::map<Subsets, std::size_t> ids;
  std::vector<Subsets> states;
  MembershipDfa dfa;
  auto intern = [&](Subsets s) {
    auto [it, fresh] = ids.emplace(s, states.size());
    if (fresh) {
      states.push_back(std::move(s));
      dfa.next.emplace_back();
      dfa.member.emplace_back();
    }
    return it->second;
  };
  auto move = [&](const Subsets& from, Symbol s) {
    Subsets to(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) {
      for (StateId q : from[i])
        for (TransitionId t : ones[i].outgoing(q, s)) to[i].push_back(ones[i].transition(t).to);
      std::sort(to[i].begin(), to[i].end());
      to[i].erase(std::unique(to[i].begin(), to[i].end()), to[i].end());
    }
    return to;
  };
  Subsets init(ones.size());
  for (std::size_t i = 0; i < ones.size(); ++i) init[i] = ones[i].initial_states();
  dfa.start = intern(move(init, kBegin));
  for (std::size_t done = 0; done < states.size(); ++done) {
    for (std::size_t i = 0; i < ones.size(); ++i) {
      bool in = std::any_of(states[done][i].begin(), states[done][i].end(),
                            [&](StateId q) { return !ones[i].outgoing(q, kEnd).empty(); });
      dfa.member[done].push_back(in);
    }
    for (Symbol s = 0; s < static_cast<Symbol>(letters); ++s) {
      std::size_t to = intern(move(states[done], s));
      dfa.next[done].push_back(to);
    }
  }
  return dfa;
}

class Builder {
 public:
  Builder(const std::vector<std::string>& alphabet, std::size_t dimension) : out_(alphabet, dimension) {}

  Automaton& automaton() { return out_; }

  // Copies src with weights shifted to start at offset. With on_accept set, transitions
  // into accepting states are redirected there. Returns the copy of the initial state.
  std::optional<StateId> copy(const Automaton& src, const std::string& prefix, std::size_t offset,
                              std::optional<StateId> on_accept, bool initial = false) {
    std::vector<std::optional<StateId>> map(src.num_states());
    for (StateId q = 0; q < src.num_states(); ++q) {
      const State& s = src.state(q);
      if (s.accepting && on_accept) {
        map[q] = on_accept;
        continue;
      }
      map[q] = out_.add_state(prefix + s.name, s.direction, initial && s.initial, s.halting, s.accepting && !on_accept);
    }
    for (const auto& t : src.transitions()) out_.add_transition(*map[t.from], t.symbol, *map[t.to], embed(t.weight, offset));
    auto init = src.initial_states();
    if (init.empty()) return std::nullopt;
    return map[init[0]];
  }

  // Left-reading state that walks back to BEGIN and then enters next.
  StateId rewinder(const std::string& name, std::optional<StateId> next) {
    StateId r = out_.add_state(name, Direction::kLeft);
    out_.add_transition(r, kEnd, r);
    for (Symbol s = 0; s < static_cast<Symbol>(out_.num_letters()); ++s) out_.add_transition(r, s, r);
    if (next) out_.add_transition(r, kBegin, *next);
    return r;
  }

  // Initial state reading BEGIN into the dfa; returns the ids of the dfa states.
  std::vector<StateId> dfa(const MembershipDfa& d) {
    StateId start = out_.add_state("start", Direction::kRight, true);
    std::vector<StateId> ids;
    for (std::size_t i = 0; i < d.next.size(); ++i) ids.push_back(out_.add_state("d" + std::to_string(i), Direction::kRight));
    out_.add_transition(start, kBegin, ids[d.start]);
    for (std::size_t i = 0; i < d.next.size(); ++i)
      for (std::size_t s = 0; s < d.next[i].size(); ++s) out_.add_transition(ids[i], static_cast<Symbol>(s), ids[d.next[i][s]]);
    return ids;
  }

  Vector embed(const Vector& w, std::size_t offset) const {
    Vector v = zero_vector(out_.dimension());
    for (std::size_t i = 0; i < w.size(); ++i) v[offset + i] = w[i];
    return v;
  }

  Vector flags(std::initializer_list<std::pair<std::size_t, bool>> set) const {
    Vector v = zero_vector(out_.dimension());
    for (auto [i, on] : set) v[i] = on ? 1 : 0;
    return v;
  }

 private:
  Automaton out_;
};

// psi over x1..xd moved to x(offset+1)..x(offset+d).
Formula shifted(const Formula& psi, std::size_t d, std::size_t offset) {
  std::map<presburger::VarId, presburger::VarId> m;
  for (std::size_t i = 1; i <= d; ++i) m[dim_var(i)] = dim_var(offset + i);
  return presburger::rename(presburger::freshen_bound(psi), m);
}

Formula flag_is_set(std::size_t index) { return Formula::eq(LinearExpr::variable(dim_var(index + 1)), LinearExpr(1)); }

}  // namespace

Automaton intersect(const Automaton& a1, const Automaton& a2) {
  require_closable(a1);
  require_closable(a2);
  require_same_alphabet(a1, a2);
  const std::size_t d1 = a1.dimension(), d2 = a2.dimension();
  Builder b(a1.alphabet(), d1 + d2);
  auto second = b.copy(a2, "2.", d1, std::nullopt);
  StateId rewind = b.rewinder("rewind", second);
  b.copy(a1, "1.", 0, rewind, true);
  b.automaton().set_constraint(Formula::conj(a1.constraint(), shifted(a2.constraint(), d2, d1)));
  return std::move(b.automaton());
}

Automaton complement(const Automaton& a) {
  require_closable(a);
  const std::size_t d = a.dimension();
  Builder b(a.alphabet(), d + 1);
  MembershipDfa dfa = membership_dfa({&a}, a.num_letters());
  auto ids = b.dfa(dfa);
  auto sim = b.copy(a, "p.", 0, std::nullopt);
  StateId rewind = b.rewinder("rewind", sim);
  StateId outside = b.automaton().add_state("outside", Direction::kRight, false, true, true);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (dfa.member[i][0])
      b.automaton().add_transition(ids[i], kEnd, rewind);
    else
      b.automaton().add_transition(ids[i], kEnd, outside, b.flags({{d, true}}));
  }
  b.automaton().set_constraint(Formula::disj(flag_is_set(d), presburger::negate(a.constraint())));
  return std::move(b.automaton());
}

Automaton unite(const Automaton& a1, const Automaton& a2) {
  require_closable(a1);
  require_closable(a2);
  require_same_alphabet(a1, a2);
  const std::size_t d1 = a1.dimension(), d2 = a2.dimension();
  const std::size_t c1 = d1 + d2, c2 = d1 + d2 + 1;
  Builder b(a1.alphabet(), d1 + d2 + 2);
  MembershipDfa dfa = membership_dfa({&a1, &a2}, a1.num_letters());
  auto ids = b.dfa(dfa);
  StateId to_second = b.rewinder("rewind2", b.copy(a2, "2.", d1, std::nullopt));
  StateId to_both = b.rewinder("rewind1", b.copy(a1, "1.", 0, to_second));
  StateId to_first = b.rewinder("rewind1f", b.copy(a1, "1f.", 0, std::nullopt));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    bool m1 = dfa.member[i][0], m2 = dfa.member[i][1];
    if (!m1 && !m2) continue;
    StateId target = m1 ? (m2 ? to_both : to_first) : to_second;
    b.automaton().add_transition(ids[i], kEnd, target, b.flags({{c1, m1}, {c2, m2}}));
  }
  b.automaton().set_constraint(Formula::disj(Formula::conj(flag_is_set(c1), a1.constraint()),
                                             Formula::conj(flag_is_set(c2), shifted(a2.constraint(), d2, d1))));
  return std::move(b.automaton());
}

Formula inclusion_formula(const Automaton& a1, const Automaton& a2) {
  Automaton product = intersect(a1, complement(a2));
  return emptiness_formula(product, default_visit_bound(product));
}

bool includes(const Automaton& a1, const Automaton& a2) {
  Automaton product = intersect(a1, complement(a2));
  EmptinessOptions o;
  o.witness = false;
  return is_empty(product, default_visit_bound(product), o).empty;
}

bool is_universal(const Automaton& a) {
  Automaton c = complement(a);
  EmptinessOptions o;
  o.witness = false;
  return is_empty(c, default_visit_bound(c), o).empty;
}

bool equivalent(const Automaton& a1, const Automaton& a2) { return includes(a1, a2) && includes(a2, a1); }

}  // namespace twpa
