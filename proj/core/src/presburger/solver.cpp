#include "twpa/presburger/solver.hpp"

#include "twpa/error.hpp"
#include "twpa/presburger/qe.hpp"

#include "simplex.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace twpa::presburger {

bool Constraint::holds(const Valuation& v) const {
  Int value = expr.evaluate(v);
  switch (type) {
    case Type::kLe: return value <= 0;
    case Type::kEq: return value == 0;
    case Type::kDvd: return divides(modulus, value);
    case Type::kNotDvd: return !divides(modulus, value);
  }
  return false;
}

namespace {

using Type = Constraint::Type;

Int eval_default(const LinearExpr& e, Valuation& model) {
  Int value = e.constant();
  for (const auto& [v, a] : e.terms()) {
    auto it = model.find(v);
    if (it == model.end()) it = model.emplace(v, 0).first;
    value += a * it->second;
  }
  return value;
}

// -1: unsatisfiable, 0: trivially true, 1: keep.
int normalize(Constraint& c) {
  switch (c.type) {
    case Type::kLe: {
      if (c.expr.is_constant()) return c.expr.constant() <= 0 ? 0 : -1;
      Int g = c.expr.content();
      if (g > 1) {
        LinearExpr e(ceil_div(c.expr.constant(), g));
        for (const auto& [v, a] : c.expr.terms()) e.add_term(v, a / g);
        c.expr = std::move(e);
      }
      return 1;
    }
    case Type::kEq: {
      if (c.expr.is_constant()) return c.expr.constant() == 0 ? 0 : -1;
      Int g = c.expr.content();
      if (!divides(g, c.expr.constant())) return -1;
      if (g > 1) {
        LinearExpr e(c.expr.constant() / g);
        for (const auto& [v, a] : c.expr.terms()) e.add_term(v, a / g);
        c.expr = std::move(e);
      }
      if (c.expr.terms().front().second < 0) c.expr *= Int(-1);
      return 1;
    }
    case Type::kDvd:
    case Type::kNotDvd: {
      const bool positive = c.type == Type::kDvd;
      Int m = abs(c.modulus);
      LinearExpr r(mod(c.expr.constant(), m));
      for (const auto& [v, a] : c.expr.terms()) r.add_term(v, mod(a, m));
      if (r.is_constant()) return (r.constant() == 0) == positive ? 0 : -1;
      Int g = m;
      for (const auto& [v, a] : r.terms()) g = gcd(g, a);
      if (g > 1) {
        if (!divides(g, r.constant())) return positive ? -1 : 0;
        LinearExpr s(r.constant() / g);
        for (const auto& [v, a] : r.terms()) s.add_term(v, a / g);
        r = std::move(s);
        m /= g;
      }
      if (m == 1) return positive ? 0 : -1;
      c.expr = std::move(r);
      c.modulus = std::move(m);
      return 1;
    }
  }
  return 1;
}

// Deduplicates bounds and turns opposite tight bounds into equalities. False on conflict.
bool merge_bounds(std::vector<Constraint>& cs) {
  std::map<LinearExpr, Int> le;  // linear part -> strongest constant
  std::map<LinearExpr, Int> eq;
  std::set<std::pair<Int, LinearExpr>> dvd, ndvd;
  for (auto& c : cs) {
    LinearExpr lin = c.expr.without_constant();
    const Int& k = c.expr.constant();
    switch (c.type) {
      case Type::kLe: {
        auto it = le.find(lin);
        if (it == le.end()) le.emplace(std::move(lin), k);
        else if (k > it->second) it->second = k;
        break;
      }
      case Type::kEq: {
        auto it = eq.find(lin);
        if (it == eq.end()) eq.emplace(std::move(lin), k);
        else if (k != it->second) return false;
        break;
      }
      case Type::kDvd: dvd.emplace(c.modulus, c.expr); break;
      case Type::kNotDvd: ndvd.emplace(c.modulus, c.expr); break;
    }
  }
  for (const auto& [m, e] : dvd)
    if (ndvd.count({m, e})) return false;
  std::vector<Constraint> out;
  std::set<LinearExpr> consumed;
  for (const auto& [lin, c1] : le) {
    if (consumed.count(lin)) continue;
    auto it = le.find(-lin);
    if (it != le.end()) {
      const Int& c2 = it->second;  // c2 <= lin <= -c1
      if (c2 > -c1) return false;
      if (c2 == -c1) {
        consumed.insert(-lin);
        LinearExpr e = lin + LinearExpr(c1);
        if (e.terms().front().second < 0) e *= Int(-1);
        LinearExpr l2 = e.without_constant();
        auto q = eq.find(l2);
        if (q == eq.end()) eq.emplace(std::move(l2), e.constant());
        else if (q->second != e.constant()) return false;
        continue;
      }
    }
    out.push_back(Constraint::le(lin + LinearExpr(c1)));
  }
  for (const auto& [lin, k] : eq) out.push_back(Constraint::eq(lin + LinearExpr(k)));
  for (const auto& [m, e] : dvd) out.push_back(Constraint::dvd(m, e));
  for (const auto& [m, e] : ndvd) out.push_back(Constraint::not_dvd(m, e));
  cs = std::move(out);
  return true;
}

struct Recon {
  enum class Kind { kAssign, kBounds, kBelow, kAbove };
  Recon(Kind k, VarId v) : kind(k), var(v) {}
  Kind kind;
  VarId var;
  LinearExpr num;  // kAssign: var = num / den
  Int den = 1;
  std::vector<Constraint> bounds;  // kBounds: inequalities in var; kBelow/kAbove: unitized bounds
  Int residue = 0, modulus = 1, delta = 1;
};

void reconstruct(const Recon& r, Valuation& model) {
  switch (r.kind) {
    case Recon::Kind::kAssign: {
      model[r.var] = eval_default(r.num, model) / r.den;
      return;
    }
    case Recon::Kind::kBounds: {
      std::optional<Int> lo, hi;
      for (const auto& c : r.bounds) {
        Int a = c.expr.coefficient(r.var);
        Int rest = eval_default(c.expr.without(r.var), model);
        if (a > 0) {
          Int h = floor_div(-rest, a);
          if (!hi || h < *hi) hi = h;
        } else {
          Int l = ceil_div(rest, -a);
          if (!lo || l > *lo) lo = l;
        }
      }
      model[r.var] = lo ? *lo : hi ? *hi : Int(0);
      return;
    }
    case Recon::Kind::kBelow:
    case Recon::Kind::kAbove: {
      // r.bounds are unitized: +x' + rest <= 0 (upper) or -x' + rest <= 0 (lower).
      std::optional<Int> edge;
      for (const auto& c : r.bounds) {
        Int rest = eval_default(c.expr.without(r.var), model);
        Int b = r.kind == Recon::Kind::kBelow ? Int(-rest) : rest;
        if (!edge || (r.kind == Recon::Kind::kBelow ? b < *edge : b > *edge)) edge = b;
      }
      Int x;
      if (!edge) x = r.residue;
      else if (r.kind == Recon::Kind::kBelow) x = *edge - mod(*edge - r.residue, r.modulus);
      else x = *edge + mod(r.residue - *edge, r.modulus);
      model[r.var] = x / r.delta;
      return;
    }
  }
}

struct VarStats {
  std::size_t lower = 0, upper = 0, occurrences = 0;
  bool in_dvd = false;
  bool lower_unit = true, upper_unit = true;
  Int delta = 1;
  Int dvd_lcm = 1;
};

class ConjunctionSolver {
 public:
  std::optional<Valuation> solve(std::vector<Constraint> cs) {
    std::vector<Recon> recon;
    for (;;) {
      std::vector<Constraint> kept;
      kept.reserve(cs.size());
      for (auto& c : cs) {
        int r = normalize(c);
        if (r < 0) return std::nullopt;
        if (r > 0) kept.push_back(std::move(c));
      }
      cs = std::move(kept);
      if (!merge_bounds(cs)) return std::nullopt;
      if (!eliminate_equality(cs, recon)) break;
    }
    std::optional<Valuation> model;
    if (top_ && cs.size() > 2) {
      // Branch and bound first; the elimination below decides what it leaves open.
      top_ = false;
      auto r = integer_search(cs, 64);
      if (r.result == IntegerSearch::Result::kInfeasible) return std::nullopt;
      if (r.result == IntegerSearch::Result::kModel) model = std::move(r.model);
    } else if (cs.size() > 2 && !rational_feasible(cs)) {
      return std::nullopt;
    }
    top_ = false;
    if (!model) model = cs.empty() ? Valuation{} : eliminate_variable(std::move(cs));
    if (!model) return std::nullopt;
    for (auto it = recon.rbegin(); it != recon.rend(); ++it) reconstruct(*it, *model);
    return model;
  }

 private:
  // Substitutes away one equality; false when there is none.
  bool eliminate_equality(std::vector<Constraint>& cs, std::vector<Recon>& recon) {
    std::size_t best = cs.size();
    VarId var = 0;
    Int best_abs = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs[i].type != Type::kEq) continue;
      for (const auto& [v, a] : cs[i].expr.terms()) {
        Int m = abs(a);
        if (best == cs.size() || m < best_abs) {
          best = i;
          var = v;
          best_abs = m;
        }
      }
      if (best_abs == 1) break;
    }
    if (best == cs.size()) return false;
    Constraint eq = cs[best];
    cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(best));
    Int a = eq.expr.coefficient(var);
    LinearExpr rest = eq.expr.without(var);  // a*var + rest = 0
    Recon r(Recon::Kind::kAssign, var);
    r.num = -rest;
    r.den = a;
    if (abs(a) == 1) {
      LinearExpr value = rest * Int(-a);
      for (auto& c : cs) c.expr = c.expr.substitute(var, value);
    } else {
      // |a| var = -sign(a) rest; scale every constraint mentioning var by |a|.
      Int m = abs(a);
      LinearExpr scaled = rest * Int(-sgn(a));
      for (auto& c : cs) {
        Int b = c.expr.coefficient(var);
        if (b == 0) continue;
        LinearExpr e = c.expr.without(var) * m + scaled * b;
        c.expr = std::move(e);
        if (c.type == Type::kDvd || c.type == Type::kNotDvd) c.modulus *= m;
      }
      cs.push_back(Constraint::dvd(m, rest));
    }
    recon.push_back(std::move(r));
    return true;
  }

  bool top_ = true;

  std::optional<Valuation> eliminate_variable(std::vector<Constraint> cs) {
    std::map<VarId, VarStats> stats;
    for (const auto& c : cs) {
      for (const auto& [v, a] : c.expr.terms()) {
        auto& s = stats[v];
        ++s.occurrences;
        s.delta = lcm(s.delta, abs(a));
        if (c.type == Type::kLe) {
          if (a > 0) {
            ++s.upper;
            if (a != 1) s.upper_unit = false;
          } else {
            ++s.lower;
            if (a != -1) s.lower_unit = false;
          }
        } else {
          s.in_dvd = true;
          s.dvd_lcm = lcm(s.dvd_lcm, c.modulus);
        }
      }
    }
    // One-sided variables without divisibility constraints can always be satisfied.
    for (const auto& [v, s] : stats) {
      if (!s.in_dvd && (s.lower == 0 || s.upper == 0)) return drop_variable(v, std::move(cs));
    }
    std::optional<VarId> fm;
    Int fm_cost = 0;
    std::optional<VarId> cooper;
    Int cooper_cost = 0;
    for (const auto& [v, s] : stats) {
      if (!s.in_dvd && (s.lower_unit || s.upper_unit)) {
        Int cost = Int(s.lower) * Int(s.upper) - Int(s.lower) - Int(s.upper);
        if (!fm || cost < fm_cost) {
          fm = v;
          fm_cost = cost;
        }
      }
      Int d = lcm(s.delta, s.dvd_lcm);
      Int cost = Int(std::min(s.lower, s.upper) + (std::min(s.lower, s.upper) == 0 ? 1 : 0)) * d;
      if (!cooper || cost < cooper_cost) {
        cooper = v;
        cooper_cost = cost;
      }
    }
    if (fm && (fm_cost <= 0 || cooper_cost > 3)) return fourier_motzkin(*fm, std::move(cs));
    return cooper_branch(*cooper, std::move(cs));
  }

  std::optional<Valuation> drop_variable(VarId v, std::vector<Constraint> cs) {
    Recon r(Recon::Kind::kBounds, v);
    std::vector<Constraint> rest;
    for (auto& c : cs) {
      if (c.expr.mentions(v)) r.bounds.push_back(std::move(c));
      else rest.push_back(std::move(c));
    }
    auto model = solve(std::move(rest));
    if (model) reconstruct(r, *model);
    return model;
  }

  std::optional<Valuation> fourier_motzkin(VarId v, std::vector<Constraint> cs) {
    Recon r(Recon::Kind::kBounds, v);
    std::vector<Constraint> rest, lowers, uppers;
    for (auto& c : cs) {
      Int a = c.expr.coefficient(v);
      if (a == 0) {
        rest.push_back(std::move(c));
        continue;
      }
      (a > 0 ? uppers : lowers).push_back(c);
      r.bounds.push_back(std::move(c));
    }
    for (const auto& lo : lowers) {
      Int alpha = -lo.expr.coefficient(v);
      LinearExpr lr = lo.expr.without(v);  // alpha v >= lr... as -alpha v + lr <= 0
      for (const auto& up : uppers) {
        Int beta = up.expr.coefficient(v);
        LinearExpr us = up.expr.without(v);
        rest.push_back(Constraint::le(lr * beta + us * alpha));
      }
    }
    auto model = solve(std::move(rest));
    if (model) reconstruct(r, *model);
    return model;
  }

  std::optional<Valuation> cooper_branch(VarId v, std::vector<Constraint> cs) {
    Int delta = 1;
    for (const auto& c : cs) {
      Int a = c.expr.coefficient(v);
      if (a != 0) delta = lcm(delta, abs(a));
    }
    std::vector<Constraint> unit;
    unit.reserve(cs.size() + 1);
    for (auto& c : cs) {
      Int a = c.expr.coefficient(v);
      if (a == 0) {
        unit.push_back(std::move(c));
        continue;
      }
      Int s = delta / abs(a);
      LinearExpr e = c.expr.without(v) * s;
      e.add_term(v, sgn(a));
      Constraint u = c;
      u.expr = std::move(e);
      if (c.type != Type::kLe) {
        u.modulus = c.modulus * s;
        if (a < 0) u.expr *= Int(-1);
      }
      unit.push_back(std::move(u));
    }
    if (delta > 1) unit.push_back(Constraint::dvd(delta, LinearExpr::variable(v)));
    Int modulus = 1;
    std::set<LinearExpr> lower_pts, upper_pts;
    std::vector<Constraint> lower_cs, upper_cs;
    for (const auto& c : unit) {
      Int a = c.expr.coefficient(v);
      if (a == 0) continue;
      if (c.type == Type::kLe) {
        if (a < 0) {
          lower_pts.insert(c.expr.without(v) - LinearExpr(1));
          lower_cs.push_back(c);
        } else {
          upper_pts.insert(-c.expr.without(v) + LinearExpr(1));
          upper_cs.push_back(c);
        }
      } else {
        modulus = lcm(modulus, c.modulus);
      }
    }
    const bool use_lower = lower_pts.size() <= upper_pts.size();
    const auto& pts = use_lower ? lower_pts : upper_pts;
    if (pts.empty()) {
      // No bound on this side: only the congruence class matters.
      for (Int j = 1; j <= modulus; ++j) {
        Int x = use_lower ? Int(j) : Int(-j);
        std::vector<Constraint> branch;
        for (const auto& c : unit) {
          Int a = c.expr.coefficient(v);
          if (a != 0 && c.type == Type::kLe) continue;
          Constraint b = c;
          b.expr = c.expr.substitute(v, LinearExpr(x));
          branch.push_back(std::move(b));
        }
        auto model = solve(std::move(branch));
        if (!model) continue;
        Recon r(use_lower ? Recon::Kind::kBelow : Recon::Kind::kAbove, v);
        r.bounds = use_lower ? upper_cs : lower_cs;
        r.residue = x;
        r.modulus = modulus;
        r.delta = delta;
        reconstruct(r, *model);
        return model;
      }
      return std::nullopt;
    }
    for (const auto& p : pts) {
      for (Int j = 1; j <= modulus; ++j) {
        LinearExpr value = p + LinearExpr(use_lower ? Int(j) : Int(-j));
        std::vector<Constraint> branch;
        branch.reserve(unit.size());
        for (const auto& c : unit) {
          Constraint b = c;
          b.expr = c.expr.substitute(v, value);
          branch.push_back(std::move(b));
        }
        auto model = solve(std::move(branch));
        if (!model) continue;
        Recon r(Recon::Kind::kAssign, v);
        r.num = value;
        r.den = delta;
        reconstruct(r, *model);
        return model;
      }
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------

bool eval_with_default(const Formula& f, Valuation& model) {
  switch (f.kind()) {
    case Kind::kTrue: return true;
    case Kind::kFalse: return false;
    case Kind::kLe: return eval_default(f.expr(), model) <= 0;
    case Kind::kDvd: return divides(f.modulus(), eval_default(f.expr(), model));
    case Kind::kNot: return !eval_with_default(f.children().front(), model);
    case Kind::kAnd:
      for (const auto& c : f.children())
        if (!eval_with_default(c, model)) return false;
      return true;
    case Kind::kOr:
      for (const auto& c : f.children())
        if (eval_with_default(c, model)) return true;
      return false;
    default:
      throw InvalidArgument("quantifier inside solver matrix");
  }
}

// Adds a negation-normal-form formula to the search state; false if it is trivially false.
bool add_formula(const Formula& f, std::vector<Constraint>& atoms, std::vector<Formula>& pending) {
  switch (f.kind()) {
    case Kind::kTrue: return true;
    case Kind::kFalse: return false;
    case Kind::kLe: atoms.push_back(Constraint::le(f.expr())); return true;
    case Kind::kDvd: atoms.push_back(Constraint::dvd(f.modulus(), f.expr())); return true;
    case Kind::kNot: {
      const Formula& c = f.children().front();
      if (c.kind() == Kind::kDvd) {
        atoms.push_back(Constraint::not_dvd(c.modulus(), c.expr()));
        return true;
      }
      return add_formula(negate(c), atoms, pending);
    }
    case Kind::kAnd:
      for (const auto& c : f.children())
        if (!add_formula(c, atoms, pending)) return false;
      return true;
    case Kind::kOr: pending.push_back(f); return true;
    default: throw InvalidArgument("quantifier inside solver matrix");
  }
}

class Search {
 public:
  std::optional<Valuation> run(std::vector<Constraint> atoms, std::vector<Formula> pending) {
    for (;;) {
      auto model = ConjunctionSolver().solve(atoms);
      if (!model) return std::nullopt;
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < pending.size(); ++i)
        if (!eval_with_default(pending[i], *model)) open.push_back(i);
      if (open.empty()) return model;

      // Probe the open disjunctions: drop disjuncts that conflict with the current atoms.
      std::sort(open.begin(), open.end(), [&](std::size_t a, std::size_t b) {
        return pending[a].children().size() < pending[b].children().size();
      });
      std::size_t chosen = open.front();
      std::vector<Formula> viable;
      bool propagated = false;
      for (std::size_t idx : open) {
        std::vector<Formula> alive;
        for (const auto& d : pending[idx].children()) {
          std::vector<Constraint> probe = atoms;
          std::vector<Formula> ignored;
          if (!add_formula(d, probe, ignored)) continue;
          if (probe.size() == atoms.size() || ConjunctionSolver().solve(probe)) alive.push_back(d);
        }
        if (alive.empty()) return std::nullopt;
        if (alive.size() == 1) {
          Formula unit = alive.front();
          pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(idx));
          if (!add_formula(unit, atoms, pending)) return std::nullopt;
          propagated = true;
          break;
        }
        if (viable.empty() || alive.size() < viable.size()) {
          viable = std::move(alive);
          chosen = idx;
        }
        if (viable.size() == 2) break;
      }
      if (propagated) continue;

      // Try disjuncts satisfied by more of the current model first.
      std::vector<std::pair<std::size_t, Formula>> order;
      for (const auto& d : viable) {
        std::vector<Constraint> part;
        std::vector<Formula> ignored;
        add_formula(d, part, ignored);
        std::size_t score = 0;
        for (const auto& c : part) {
          Int value = eval_default(c.expr, *model);
          bool ok = c.type == Type::kLe ? value <= 0
                    : c.type == Type::kEq ? value == 0
                    : divides(c.modulus, value) == (c.type == Type::kDvd);
          if (ok) ++score;
        }
        order.emplace_back(part.size() - score, d);
      }
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<Formula> rest = pending;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(chosen));
      for (const auto& [score, d] : order) {
        std::vector<Constraint> a2 = atoms;
        std::vector<Formula> p2 = rest;
        if (!add_formula(d, a2, p2)) continue;
        if (auto m = run(std::move(a2), std::move(p2))) return m;
      }
      return std::nullopt;
    }
  }

};

// Strips positive existentials and replaces universal subformulas by their elimination.
Formula existential_matrix(const Formula& f) {
  switch (f.kind()) {
    case Kind::kExists: return existential_matrix(f.body());
    case Kind::kForall: return eliminate_all(f);
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(existential_matrix(c));
      return f.kind() == Kind::kAnd ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    default: return f;
  }
}

}  // namespace

std::optional<Valuation> solve_conjunction(const std::vector<Constraint>& constraints) {
  auto model = ConjunctionSolver().solve(constraints);
  if (!model) return model;
  for (const auto& c : constraints)
    for (const auto& [v, a] : c.expr.terms()) model->emplace(v, 0);
  for (const auto& c : constraints)
    if (!c.holds(*model)) throw Error("internal error: conjunction solver produced an invalid model");
  return model;
}

std::optional<Valuation> find_model(const Formula& f) {
  // Bound variables are renamed apart so that stripping binders cannot confuse scopes.
  Formula matrix = simplify(existential_matrix(freshen_bound(nnf(f))));
  std::vector<Constraint> atoms;
  std::vector<Formula> pending;
  if (!add_formula(matrix, atoms, pending)) return std::nullopt;
  auto model = Search().run(std::move(atoms), std::move(pending));
  if (!model) return model;
  if (!eval_with_default(matrix, *model)) throw Error("internal error: search produced an invalid model");
  Valuation out;
  for (VarId v : free_vars(f)) {
    auto it = model->find(v);
    out[v] = it == model->end() ? Int(0) : it->second;
  }
  return out;
}

bool is_satisfiable(const Formula& f) { return find_model(f).has_value(); }

bool is_valid(const Formula& f) { return !is_satisfiable(negate(f)); }

bool holds(const Formula& f, const Valuation& valuation) {
  if (f.is_quantifier_free()) return eval_ground(f, valuation);
  std::map<VarId, LinearExpr> m;
  for (VarId v : free_vars(f)) {
    auto it = valuation.find(v);
    if (it == valuation.end()) throw InvalidArgument("unbound variable " + var_name(v));
    m.emplace(v, LinearExpr(it->second));
  }
  return is_satisfiable(substitute(f, m));
}

}  // namespace twpa::presburger
