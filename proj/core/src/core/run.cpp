#include "twpa/run.hpp"

#include "twpa/error.hpp"
#include "twpa/presburger/solver.hpp"

#include <deque>
#include <functional>

namespace twpa {

std::vector<std::pair<TransitionId, Configuration>> step(const Automaton& a, const Word& word, const Configuration& c) {
  const std::size_t n = word.size();
  if (c.position > n + 2) throw InvalidArgument("head position out of range");
  std::vector<std::pair<TransitionId, Configuration>> out;
  const State& s = a.state(c.state);
  if (s.halting) return out;
  std::size_t index;  // tape index of the letter read
  std::size_t next;
  if (s.direction == Direction::kRight) {
    if (c.position > n + 1) return out;
    index = c.position;
    next = c.position + 1;
  } else {
    if (c.position == 0) return out;
    index = c.position - 1;
    next = c.position - 1;
  }
  Symbol sym = index == 0 ? kBegin : index == n + 1 ? kEnd : word[index - 1];
  for (TransitionId t : a.outgoing(c.state, sym)) out.emplace_back(t, Configuration{next, a.transition(t).to});
  return out;
}

Run replay(const Automaton& a, const Word& word, const Configuration& start, const std::vector<TransitionId>& trace) {
  Run r;
  r.word = word;
  r.configurations.push_back(start);
  r.value = zero_vector(a.dimension());
  for (TransitionId t : trace) {
    bool fired = false;
    for (const auto& [u, c] : step(a, word, r.last())) {
      if (u != t) continue;
      r.configurations.push_back(c);
      r.trace.push_back(t);
      r.value += a.transition(t).weight;
      fired = true;
      break;
    }
    if (!fired) throw InvalidArgument("transition " + std::to_string(t) + " cannot fire");
  }
  return r;
}

bool is_accepting_run(const Automaton& a, const Run& r) {
  const auto& first = r.configurations.front();
  const auto& last = r.last();
  return first.position == 0 && a.state(first.state).initial && a.state(last.state).accepting;
}

bool ConstraintCache::operator()(const Vector& value) {
  auto it = memo_.find(value);
  if (it != memo_.end()) return it->second;
  presburger::Valuation v;
  auto vars = presburger::dim_vars(dim_);
  for (std::size_t i = 0; i < dim_; ++i) v[vars[i]] = value[i];
  bool r = presburger::holds(psi_, v);
  memo_.emplace(value, r);
  return r;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kAccepted: return "accepted";
    case Verdict::kRejected: return "rejected";
    case Verdict::kBoundExhausted: return "bound_exhausted";
  }
  return "";
}

namespace {

Verdict simulate_deterministic(const Automaton& a, const Word& word, ConstraintCache& psi) {
  for (StateId q0 : a.initial_states()) {
    std::set<Configuration> seen;
    Configuration c{0, q0};
    Vector value = zero_vector(a.dimension());
    for (;;) {
      if (!seen.insert(c).second) break;  // loops forever
      auto next = step(a, word, c);
      if (next.empty()) {
        if (a.state(c.state).accepting && psi(value)) return Verdict::kAccepted;
        break;
      }
      value += a.transition(next.front().first).weight;
      c = next.front().second;
    }
  }
  return Verdict::kRejected;
}

}  // namespace

Verdict accepts_oracle(const Automaton& a, const Word& word, std::size_t step_bound) {
  ConstraintCache psi(a);
  if (is_deterministic(a)) return simulate_deterministic(a, word, psi);
  using Node = std::pair<Configuration, Vector>;
  std::set<Node> seen;
  std::vector<Node> frontier;
  for (StateId q0 : a.initial_states()) {
    Node n{{0, q0}, zero_vector(a.dimension())};
    if (seen.insert(n).second) frontier.push_back(std::move(n));
  }
  for (std::size_t depth = 0;; ++depth) {
    std::vector<Node> next;
    for (const auto& [c, value] : frontier) {
      if (a.state(c.state).accepting && psi(value)) return Verdict::kAccepted;
      if (depth == step_bound) continue;
      for (const auto& [t, d] : step(a, word, c)) {
        Node n{d, value};
        n.second += a.transition(t).weight;
        if (seen.insert(n).second) next.push_back(std::move(n));
      }
    }
    if (depth == step_bound) {
      for (const auto& [c, value] : frontier)
        if (!step(a, word, c).empty()) return Verdict::kBoundExhausted;
      return Verdict::kRejected;
    }
    if (next.empty()) return Verdict::kRejected;
    frontier = std::move(next);
  }
}

std::vector<Word> all_words(std::size_t num_letters, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len && num_letters > 0; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t s = 0; s < num_letters; ++s) {
        Word w = out[i];
        w.push_back(static_cast<Symbol>(s));
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

std::set<Word> language_sample(const Automaton& a, std::size_t max_len, std::size_t step_bound) {
  std::set<Word> out;
  for (auto& w : all_words(a.num_letters(), max_len))
    if (accepts_oracle(a, w, step_bound) == Verdict::kAccepted) out.insert(std::move(w));
  return out;
}

std::size_t max_visits(const Run& r) {
  std::map<std::size_t, std::size_t> count;
  std::size_t best = 0;
  for (const auto& c : r.configurations) best = std::max(best, ++count[c.position]);
  return best;
}

namespace {

// Depth-first enumeration of initial runs; visit returns false to stop.
void enumerate_runs(const Automaton& a, const Word& word, std::size_t step_bound,
                    const std::function<bool(const Run&)>& visit) {
  Run r;
  r.word = word;
  bool stop = false;
  std::function<void()> dfs = [&] {
    if (stop) return;
    if (a.state(r.last().state).halting) {
      if (!visit(r)) stop = true;
      return;
    }
    if (r.trace.size() == step_bound) return;
    for (const auto& [t, c] : step(a, word, r.last())) {
      r.trace.push_back(t);
      r.configurations.push_back(c);
      r.value += a.transition(t).weight;
      dfs();
      Vector w = a.transition(t).weight;
      for (std::size_t i = 0; i < w.size(); ++i) r.value[i] -= w[i];
      r.configurations.pop_back();
      r.trace.pop_back();
      if (stop) return;
    }
  };
  for (StateId q0 : a.initial_states()) {
    r.configurations = {Configuration{0, q0}};
    r.trace.clear();
    r.value = zero_vector(a.dimension());
    dfs();
    if (stop) return;
  }
}

}  // namespace

std::vector<Run> accepting_runs(const Automaton& a, const Word& word, std::size_t step_bound, bool with_constraint,
                                std::size_t limit) {
  std::vector<Run> out;
  if (limit == 0) return out;
  ConstraintCache psi(a);
  enumerate_runs(a, word, step_bound, [&](const Run& r) {
    if (!a.state(r.last().state).accepting) return true;
    if (with_constraint && !psi(r.value)) return true;
    out.push_back(r);
    return out.size() < limit;
  });
  return out;
}

std::optional<Run> check_k_visit(const Automaton& a, std::size_t k, std::size_t max_len, std::size_t step_bound) {
  if (k == 0) throw InvalidArgument("k must be positive");
  std::optional<Run> found;
  for (const auto& w : all_words(a.num_letters(), max_len)) {
    enumerate_runs(a, w, step_bound, [&](const Run& r) {
      if (a.state(r.last().state).accepting && max_visits(r) > k) {
        found = r;
        return false;
      }
      return true;
    });
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace twpa
