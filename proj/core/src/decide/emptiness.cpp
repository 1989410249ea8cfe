#include "twpa/crossing.hpp"
#include "twpa/decide.hpp"
#include "twpa/error.hpp"
#include "twpa/parikh.hpp"
#include "twpa/presburger/linear.hpp"
#include "twpa/presburger/solver.hpp"
#include "twpa/presburger/term.hpp"

#include <map>

namespace twpa {

using presburger::Formula;
using presburger::LinearExpr;
using presburger::Valuation;
using presburger::VarId;

namespace {

// Flow of the converted automaton together with the constraint on its value, with the
// padded length as a linear expression.
struct WitnessSystem {
  FlowEncoding flow;
  Formula formula;
  LinearExpr padded_length;
  std::vector<Formula> cuts;
};

WitnessSystem witness_system(const Automaton& r) {
  WitnessSystem s{FlowEncoding{}, Formula::top(), LinearExpr(), {}};
  s.flow = flow_encoding(r);
  std::map<VarId, LinearExpr> value;
  for (std::size_t k = 0; k < r.dimension(); ++k) value[presburger::dim_var(k + 1)] = LinearExpr();
  for (std::size_t t = 0; t < r.transitions().size(); ++t) {
    if (!s.flow.edge[t]) continue;
    LinearExpr y = LinearExpr::variable(*s.flow.edge[t]);
    s.padded_length += y;
    const Vector& w = r.transition(t).weight;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] != 0) value[presburger::dim_var(k + 1)] += LinearExpr::variable(*s.flow.edge[t], w[k]);
  }
  s.padded_length -= LinearExpr(2);
  Formula psi = presburger::substitute(presburger::freshen_bound(r.constraint()), value);
  s.formula = Formula::conj(s.flow.balance, psi);
  return s;
}

// Models of sys.formula and extra with connected support. Cuts found on the way are
// kept in sys for later calls.
std::optional<Valuation> solve(const Automaton& r, WitnessSystem& sys, const Formula& extra) {
  for (;;) {
    std::vector<Formula> parts{sys.formula, extra};
    parts.insert(parts.end(), sys.cuts.begin(), sys.cuts.end());
    auto model = presburger::find_model(Formula::conj(parts));
    if (!model) return std::nullopt;
    auto cut = connectivity_cut(r, sys.flow, *model);
    if (!cut) return model;
    sys.cuts.push_back(std::move(*cut));
  }
}

// An accepting run of the one-way automaton r using transition t exactly y_t times.
std::vector<TransitionId> euler_path(const Automaton& r, const FlowEncoding& flow, const Valuation& model) {
  std::vector<std::vector<std::pair<TransitionId, Int>>> out(r.num_states());
  std::optional<TransitionId> begin;
  for (std::size_t t = 0; t < r.transitions().size(); ++t) {
    if (!flow.edge[t]) continue;
    auto it = model.find(*flow.edge[t]);
    Int y = it == model.end() ? Int(0) : it->second;
    if (y <= 0) continue;
    if (r.transition(t).symbol == kBegin)
      begin = t;
    else
      out[r.transition(t).from].push_back({t, y});
  }
  if (!begin) throw Error("flow model without a BEGIN transition");
  // Hierholzer, iterative
  std::vector<std::size_t> cursor(r.num_states(), 0);
  std::vector<std::pair<StateId, std::optional<TransitionId>>> stack{{r.transition(*begin).to, std::nullopt}};
  std::vector<TransitionId> reversed;
  while (!stack.empty()) {
    StateId v = stack.back().first;
    auto& edges = out[v];
    while (cursor[v] < edges.size() && edges[cursor[v]].second == 0) ++cursor[v];
    if (cursor[v] == edges.size()) {
      if (stack.back().second) reversed.push_back(*stack.back().second);
      stack.pop_back();
      continue;
    }
    auto& [t, left] = edges[cursor[v]];
    left -= 1;
    stack.push_back({r.transition(t).to, t});
  }
  std::vector<TransitionId> path{*begin};
  path.insert(path.end(), reversed.rbegin(), reversed.rend());
  return path;
}

// Replays the one-way path, reads the padded word and maps the section states back to
// a run of a.
Witness realize(const Automaton& a, const Conversion& conv, const std::vector<TransitionId>& path) {
  Word padded;
  std::vector<CrossingSection> sections;
  for (TransitionId t : path) {
    const Transition& tr = conv.automaton.transition(t);
    if (tr.symbol >= 0) padded.push_back(tr.symbol);
    if (tr.from < conv.sections.size()) sections.push_back(conv.sections[tr.from]);
  }
  Word word = erase_pad(conv, padded);
  Run run = merge(a, sections, word);
  return {word, run, run.value};
}

Formula pipeline_formula(const Conversion& conv) {
  return length_formula(conv.automaton, presburger::dim_var(1));
}

}  // namespace

std::size_t default_visit_bound(const Automaton& a) { return std::max<std::size_t>(1, a.num_states()); }

Formula emptiness_formula(const Automaton& a, std::size_t k) { return pipeline_formula(to_one_way_emptiness(a, k)); }

EmptinessVerdict is_empty(const Automaton& a, std::size_t k, const EmptinessOptions& options) {
  Conversion conv = to_one_way_emptiness(a, k);
  WitnessSystem sys = witness_system(conv.automaton);
  auto model = solve(conv.automaton, sys, Formula::top());
  EmptinessVerdict verdict;
  verdict.empty = !model.has_value();
  if (verdict.empty || !options.witness) return verdict;

  Int longest = sys.padded_length.constant();
  for (const auto& [v, c] : sys.padded_length.terms()) {
    auto it = model->find(v);
    if (it != model->end()) longest += it->second * c;
  }
  if (options.shortest) {
    for (Int l = 0; l < longest; ++l) {
      if (auto m = solve(conv.automaton, sys, Formula::eq(sys.padded_length, LinearExpr(l)))) {
        model = std::move(m);
        longest = l;
        break;
      }
    }
  }
  if (longest > options.max_witness_length) return verdict;
  Witness w = realize(a, conv, euler_path(conv.automaton, sys.flow, *model));
  Run check = replay(a, w.word, w.run.configurations.front(), w.run.trace);
  if (!is_accepting_run(a, check) || !presburger::substitute_constants(a.constraint(), check.value).value())
    throw Error("internal error: extracted witness does not replay");
  verdict.witness = std::move(w);
  return verdict;
}

EmptinessVerdict is_empty_generalized(const Automaton& a, std::size_t k, const EmptinessOptions& options) {
  return is_empty(a, k, options);
}

Automaton configuration_automaton(const Automaton& a, const Word& w) {
  for (Symbol s : w)
    if (s < 0 || static_cast<std::size_t>(s) >= a.num_letters()) throw InvalidArgument("foreign symbol in word");
  Automaton out({"step"}, a.dimension());
  StateId start = out.add_state("start", Direction::kRight, true);
  StateId top = out.add_state("accept", Direction::kRight, false, true, true);
  std::map<Configuration, StateId> ids;
  std::vector<Configuration> work;
  auto id = [&](const Configuration& c) {
    auto [it, fresh] = ids.emplace(c, 0);
    if (fresh) {
      it->second = out.add_state(std::to_string(c.position) + ":" + a.state(c.state).name, Direction::kRight);
      work.push_back(c);
    }
    return it->second;
  };
  for (StateId q : a.initial_states()) out.add_transition(start, kBegin, id({0, q}));
  const std::size_t end = w.size() + 2;
  while (!work.empty()) {
    Configuration c = work.back();
    work.pop_back();
    StateId from = ids.at(c);
    if (a.state(c.state).accepting && c.position == end) out.add_transition(from, kEnd, top);
    for (const auto& [t, next] : step(a, w, c)) out.add_transition(from, 0, id(next), a.transition(t).weight);
  }
  out.set_constraint(a.constraint());
  return out;
}

bool membership(const Automaton& a, const Word& w) {
  EmptinessOptions o;
  o.witness = false;
  return !is_empty(configuration_automaton(a, w), 1, o).empty;
}

}  // namespace twpa
