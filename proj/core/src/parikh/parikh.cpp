#include "twpa/parikh.hpp"

#include "twpa/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace twpa {

using presburger::Formula;
using presburger::LinearExpr;
using presburger::VarId;

namespace {

void require_one_way(const Automaton& a) {
  if (!is_one_way(a)) throw InvalidArgument("expected a one-way automaton (no L-reading states)");
}

// Transitions that lie on some initial-BEGIN ... END-accepting path.
std::vector<bool> useful_transitions(const Automaton& a) {
  const std::size_t n = a.num_states();
  std::vector<bool> fwd(n, false), bwd(n, false);
  std::deque<StateId> work;
  auto usable = [&](const Transition& t) {
    if (t.symbol == kBegin) return a.state(t.from).initial;
    if (t.symbol == kEnd) return a.state(t.to).accepting;
    return true;
  };
  for (const auto& t : a.transitions())
    if (t.symbol == kBegin && usable(t) && !fwd[t.to]) {
      fwd[t.to] = true;
      work.push_back(t.to);
    }
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    for (const auto& t : a.transitions())
      if (t.from == q && t.symbol >= 0 && !fwd[t.to]) {
        fwd[t.to] = true;
        work.push_back(t.to);
      }
  }
  for (const auto& t : a.transitions())
    if (t.symbol == kEnd && usable(t) && !bwd[t.from]) {
      bwd[t.from] = true;
      work.push_back(t.from);
    }
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    for (const auto& t : a.transitions())
      if (t.to == q && t.symbol >= 0 && !bwd[t.from]) {
        bwd[t.from] = true;
        work.push_back(t.from);
      }
  }
  std::vector<bool> out(a.transitions().size(), false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Transition& t = a.transition(i);
    if (!usable(t)) continue;
    if (t.symbol == kBegin)
      out[i] = bwd[t.to];
    else if (t.symbol == kEnd)
      out[i] = fwd[t.from];
    else
      out[i] = fwd[t.from] && bwd[t.to];
  }
  return out;
}

// Strongly connected components over letter transitions (Tarjan).
std::vector<std::size_t> components(const Automaton& a, const std::vector<bool>& useful) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<StateId>> adj(n);
  for (std::size_t i = 0; i < useful.size(); ++i)
    if (useful[i] && a.transition(i).symbol >= 0) adj[a.transition(i).from].push_back(a.transition(i).to);
  std::vector<std::size_t> comp(n, SIZE_MAX), low(n), num(n, SIZE_MAX);
  std::vector<StateId> stack;
  std::vector<bool> on(n, false);
  std::size_t counter = 0, ncomp = 0;
  std::function<void(StateId)> visit = [&](StateId v) {
    num[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (StateId w : adj[v]) {
      if (num[w] == SIZE_MAX) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], num[w]);
      }
    }
    if (low[v] == num[v]) {
      StateId w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp[w] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (StateId v = 0; v < n; ++v)
    if (num[v] == SIZE_MAX) visit(v);
  return comp;
}

LinearExpr var(VarId v) { return LinearExpr::variable(v); }

}  // namespace

LinearExpr FlowEncoding::count(const std::vector<TransitionId>& transitions) const {
  LinearExpr e;
  for (TransitionId t : transitions)
    if (edge[t]) e += var(*edge[t]);
  return e;
}

FlowEncoding flow_encoding(const Automaton& a) {
  require_one_way(a);
  FlowEncoding out;
  const auto useful = useful_transitions(a);
  out.edge.resize(a.transitions().size());
  for (std::size_t i = 0; i < useful.size(); ++i)
    if (useful[i]) out.edge[i] = presburger::fresh_var("y");

  std::vector<Formula> parts;
  std::vector<TransitionId> begins, ends;
  const std::size_t n = a.num_states();
  std::vector<std::vector<TransitionId>> in(n), out_edges(n);
  for (std::size_t i = 0; i < useful.size(); ++i) {
    if (!useful[i]) continue;
    const Transition& t = a.transition(i);
    parts.push_back(Formula::le(LinearExpr(0), var(*out.edge[i])));
    if (t.symbol == kBegin) begins.push_back(i);
    if (t.symbol == kEnd) ends.push_back(i);
    if (t.symbol >= 0) {
      in[t.to].push_back(i);
      out_edges[t.from].push_back(i);
    }
  }
  if (begins.empty() || ends.empty()) {
    out.formula = out.balance = Formula::bottom();
    return out;
  }
  parts.push_back(Formula::eq(out.count(begins), LinearExpr(1)));
  parts.push_back(Formula::eq(out.count(ends), LinearExpr(1)));

  // Kirchhoff: the path enters the letter graph through a BEGIN edge and leaves it
  // through an END edge.
  std::vector<LinearExpr> start(n), finish(n);
  for (TransitionId t : begins) start[a.transition(t).to] += var(*out.edge[t]);
  for (TransitionId t : ends) finish[a.transition(t).from] += var(*out.edge[t]);
  for (StateId q = 0; q < n; ++q) {
    LinearExpr balance = out.count(in[q]) + start[q] - out.count(out_edges[q]) - finish[q];
    if (!balance.is_constant()) parts.push_back(Formula::eq(balance, LinearExpr(0)));
  }

  out.balance = Formula::conj(parts);

  // Connectivity: inside a cyclic component, every state carrying flow has a used
  // incoming edge from a state strictly closer to the entry.
  auto comp = components(a, useful);
  std::vector<std::size_t> comp_size(n + 1, 0);
  for (StateId q = 0; q < n; ++q) ++comp_size[comp[q]];
  std::vector<std::optional<VarId>> dist(n);
  for (StateId q = 0; q < n; ++q) {
    if (in[q].empty()) continue;
    bool self_loop = std::any_of(in[q].begin(), in[q].end(), [&](TransitionId t) { return a.transition(t).from == q; });
    bool cyclic = comp_size[comp[q]] > 1;
    if (!cyclic && !self_loop) continue;
    if (cyclic && !dist[q]) {
      dist[q] = presburger::fresh_var("z");
      out.auxiliary.push_back(*dist[q]);
    }
    std::vector<Formula> reasons;
    if (!start[q].is_constant()) reasons.push_back(Formula::le(LinearExpr(1), start[q]));
    for (TransitionId t : in[q]) {
      StateId p = a.transition(t).from;
      if (p == q) continue;
      Formula used = Formula::le(LinearExpr(1), var(*out.edge[t]));
      if (comp[p] != comp[q]) {
        reasons.push_back(used);
        continue;
      }
      if (!dist[p]) {
        dist[p] = presburger::fresh_var("z");
        out.auxiliary.push_back(*dist[p]);
      }
      reasons.push_back(Formula::conj(used, Formula::eq(var(*dist[q]), var(*dist[p]) + LinearExpr(1))));
    }
    Formula idle = Formula::le(out.count(in[q]), LinearExpr(0));
    parts.push_back(Formula::disj(idle, Formula::disj(reasons)));
  }
  out.formula = Formula::conj(parts);
  return out;
}

std::optional<Formula> connectivity_cut(const Automaton& a, const FlowEncoding& flow, const presburger::Valuation& model) {
  auto used = [&](TransitionId t) {
    if (!flow.edge[t]) return false;
    auto it = model.find(*flow.edge[t]);
    return it != model.end() && it->second > 0;
  };
  const std::size_t n = a.num_states();
  std::vector<bool> reached(n, false);
  std::deque<StateId> work;
  for (std::size_t t = 0; t < a.transitions().size(); ++t)
    if (a.transition(t).symbol == kBegin && used(t) && !reached[a.transition(t).to]) {
      reached[a.transition(t).to] = true;
      work.push_back(a.transition(t).to);
    }
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    for (std::size_t t = 0; t < a.transitions().size(); ++t) {
      const Transition& tr = a.transition(t);
      if (tr.from == q && tr.symbol >= 0 && used(t) && !reached[tr.to]) {
        reached[tr.to] = true;
        work.push_back(tr.to);
      }
    }
  }
  bool stranded = false;
  std::vector<TransitionId> inside, entering;
  for (std::size_t t = 0; t < a.transitions().size(); ++t) {
    if (!flow.edge[t]) continue;
    const Transition& tr = a.transition(t);
    if (tr.symbol != kBegin && !reached[tr.from]) {
      inside.push_back(t);
      if (used(t)) stranded = true;
    } else if (!reached[tr.to] && tr.symbol != kEnd) {
      entering.push_back(t);
    }
  }
  if (!stranded) return std::nullopt;
  return Formula::disj(Formula::le(flow.count(inside), LinearExpr(0)),
                       Formula::le(LinearExpr(1), flow.count(entering)));
}

VectorAlphabetView vector_alphabet_view(const Automaton& a) {
  VectorAlphabetView v;
  std::map<Vector, std::size_t> seen;
  for (const auto& t : a.transitions()) {
    auto [it, fresh] = seen.emplace(t.weight, v.vectors.size());
    if (fresh) v.vectors.push_back(t.weight);
    v.index.push_back(it->second);
  }
  return v;
}

namespace {

std::vector<VarId> all_vars(const FlowEncoding& f) {
  std::vector<VarId> out = f.auxiliary;
  for (const auto& e : f.edge)
    if (e) out.push_back(*e);
  return out;
}

}  // namespace

Formula parikh_image_formula(const Automaton& a, const std::vector<VarId>& tau) {
  require_one_way(a);
  if (tau.size() != a.num_letters()) throw InvalidArgument("one occurrence variable per letter expected");
  FlowEncoding flow = flow_encoding(a);
  std::vector<Formula> parts{flow.formula};
  for (Symbol s = 0; s < static_cast<Symbol>(a.num_letters()); ++s) {
    std::vector<TransitionId> reading;
    for (std::size_t i = 0; i < a.transitions().size(); ++i)
      if (a.transition(i).symbol == s) reading.push_back(i);
    parts.push_back(Formula::eq(var(tau[static_cast<std::size_t>(s)]), flow.count(reading)));
  }
  return Formula::exists(all_vars(flow), Formula::conj(parts));
}

Formula length_formula(const Automaton& a, VarId ell) {
  require_one_way(a);
  FlowEncoding flow = flow_encoding(a);
  VectorAlphabetView view = vector_alphabet_view(a);
  const std::size_t gamma = view.vectors.size(), d = a.dimension();

  std::vector<VarId> tau, c;
  for (std::size_t j = 0; j < gamma; ++j) tau.push_back(presburger::fresh_var("tau"));
  for (std::size_t k = 0; k < d; ++k) c.push_back(presburger::fresh_var("c"));

  // xi(tau): the flow over the relabeled automaton
  std::vector<Formula> xi{flow.formula};
  std::vector<std::vector<TransitionId>> by_vector(gamma);
  for (std::size_t i = 0; i < view.index.size(); ++i) by_vector[view.index[i]].push_back(i);
  for (std::size_t j = 0; j < gamma; ++j) xi.push_back(Formula::eq(var(tau[j]), flow.count(by_vector[j])));

  std::vector<Formula> parts{Formula::exists(all_vars(flow), Formula::conj(xi))};
  std::map<VarId, VarId> to_c;
  for (std::size_t k = 0; k < d; ++k) to_c[presburger::dim_var(k + 1)] = c[k];
  parts.push_back(presburger::rename(presburger::freshen_bound(a.constraint()), to_c));
  LinearExpr total;
  for (VarId t : tau) total += var(t);
  parts.push_back(Formula::eq(var(ell) + LinearExpr(2), total));
  for (std::size_t k = 0; k < d; ++k) {
    LinearExpr sum;
    for (std::size_t j = 0; j < gamma; ++j)
      if (view.vectors[j][k] != 0) sum += LinearExpr::variable(tau[j], view.vectors[j][k]);
    parts.push_back(Formula::eq(var(c[k]), sum));
  }
  std::vector<VarId> bound = tau;
  bound.insert(bound.end(), c.begin(), c.end());
  return Formula::exists(bound, Formula::conj(parts));
}

Vector parikh_vector(const Automaton& a, const Word& w) {
  Vector v = zero_vector(a.num_letters());
  for (Symbol s : w) {
    if (s < 0 || static_cast<std::size_t>(s) >= a.num_letters()) throw InvalidArgument("foreign symbol in word");
    v[static_cast<std::size_t>(s)] += 1;
  }
  return v;
}

}  // namespace twpa
