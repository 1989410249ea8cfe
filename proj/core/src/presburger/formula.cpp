#include "twpa/presburger/formula.hpp"

#include "twpa/error.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_set>

namespace twpa::presburger {

struct Formula::Node {
  Kind kind = Kind::kTrue;
  LinearExpr expr;
  Int modulus = 0;
  std::vector<Formula> children;
  VarId var = 0;
  std::size_t hash = 0;
  std::size_t size = 1;
  bool quantifier_free = true;
};

namespace {

std::shared_ptr<Formula::Node> make_node(Kind kind) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = kind;
  return n;
}

void finish(Formula::Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x9e3779b97f4a7c15ull;
  h ^= n.expr.hash() + 0x9e3779b9 + (h << 6) + (h >> 2);
  h ^= IntHash()(n.modulus) + (h << 6);
  h ^= (static_cast<std::size_t>(n.var) + 1) * 1000003u;
  n.size = 1;
  n.quantifier_free = n.kind != Kind::kExists && n.kind != Kind::kForall;
  for (const auto& c : n.children) {
    h = h * 1099511628211ull ^ c.hash();
    n.size += c.size();
    n.quantifier_free = n.quantifier_free && c.is_quantifier_free();
  }
  n.hash = h;
}

}  // namespace

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = make_node(Kind::kTrue);
    finish(*n);
    return n;
  }();
  return Formula(node);
}

Formula Formula::bottom() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = make_node(Kind::kFalse);
    finish(*n);
    return n;
  }();
  return Formula(node);
}

Formula Formula::le(LinearExpr e) {
  if (e.is_constant()) return constant(e.constant() <= 0);
  auto n = make_node(Kind::kLe);
  n->expr = std::move(e);
  finish(*n);
  return Formula(n);
}

Formula Formula::le(const LinearExpr& a, const LinearExpr& b) { return le(a - b); }

Formula Formula::lt(const LinearExpr& a, const LinearExpr& b) { return le(a - b + LinearExpr(1)); }

Formula Formula::eq(const LinearExpr& a, const LinearExpr& b) { return conj(le(a, b), le(b, a)); }

Formula Formula::dvd(Int modulus, LinearExpr e) {
  if (modulus < 0) modulus = -modulus;
  if (modulus == 0) throw InvalidArgument("divisibility by zero");
  if (modulus == 1) return top();
  if (e.is_constant()) return constant(divides(modulus, e.constant()));
  auto n = make_node(Kind::kDvd);
  n->expr = std::move(e);
  n->modulus = std::move(modulus);
  finish(*n);
  return Formula(n);
}

Formula Formula::negation(Formula f) {
  if (f.is_true()) return bottom();
  if (f.is_false()) return top();
  if (f.kind() == Kind::kNot) return f.children().front();
  auto n = make_node(Kind::kNot);
  n->children.push_back(std::move(f));
  finish(*n);
  return Formula(n);
}

Formula Formula::junction(Kind kind, std::vector<Formula> parts) {
  const bool is_and = kind == Kind::kAnd;
  std::vector<Formula> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    if (p.kind() == kind) {
      for (const auto& c : p.children()) flat.push_back(c);
    } else if (p.is_true()) {
      if (!is_and) return Formula::top();
    } else if (p.is_false()) {
      if (is_and) return Formula::bottom();
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return Formula::constant(is_and);
  if (flat.size() == 1) return flat.front();
  auto n = make_node(kind);
  n->children = std::move(flat);
  finish(*n);
  return Formula(std::shared_ptr<const Formula::Node>(n));
}

Formula Formula::conj(std::vector<Formula> parts) { return junction(Kind::kAnd, std::move(parts)); }
Formula Formula::disj(std::vector<Formula> parts) { return junction(Kind::kOr, std::move(parts)); }

Formula Formula::iff(Formula a, Formula b) {
  return conj(implies(a, b), implies(b, a));
}

Formula Formula::exists(VarId v, Formula body) {
  auto n = make_node(Kind::kExists);
  n->var = v;
  n->children.push_back(std::move(body));
  finish(*n);
  return Formula(n);
}

Formula Formula::forall(VarId v, Formula body) {
  auto n = make_node(Kind::kForall);
  n->var = v;
  n->children.push_back(std::move(body));
  finish(*n);
  return Formula(n);
}

Formula Formula::exists(const std::vector<VarId>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

Formula Formula::forall(const std::vector<VarId>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

Kind Formula::kind() const { return node_->kind; }
const LinearExpr& Formula::expr() const { return node_->expr; }
const Int& Formula::modulus() const { return node_->modulus; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
VarId Formula::var() const { return node_->var; }
bool Formula::is_quantifier_free() const { return node_->quantifier_free; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.var() != b.var() || a.modulus() != b.modulus() || a.expr() != b.expr()) return false;
  return a.children() == b.children();
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.size() != b.size()) return a.size() < b.size();
  if (a.var() != b.var()) return a.var() < b.var();
  if (a.modulus() != b.modulus()) return a.modulus() < b.modulus();
  if (a.expr() != b.expr()) return a.expr() < b.expr();
  return std::lexicographical_compare(a.children().begin(), a.children().end(), b.children().begin(),
                                      b.children().end());
}

// ---------------------------------------------------------------------------

namespace {

void collect_free(const Formula& f, std::vector<VarId>& bound, std::set<VarId>& out) {
  switch (f.kind()) {
    case Kind::kTrue:
    case Kind::kFalse:
      return;
    case Kind::kLe:
    case Kind::kDvd:
      for (const auto& [v, a] : f.expr().terms())
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.insert(v);
      return;
    case Kind::kExists:
    case Kind::kForall:
      bound.push_back(f.var());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : f.children()) collect_free(c, bound, out);
  }
}

}  // namespace

std::set<VarId> free_vars(const Formula& f) {
  std::set<VarId> out;
  std::vector<VarId> bound;
  collect_free(f, bound, out);
  return out;
}

bool eval_ground(const Formula& f, const Valuation& valuation) {
  switch (f.kind()) {
    case Kind::kTrue: return true;
    case Kind::kFalse: return false;
    case Kind::kLe: return f.expr().evaluate(valuation) <= 0;
    case Kind::kDvd: return divides(f.modulus(), f.expr().evaluate(valuation));
    case Kind::kNot: return !eval_ground(f.children().front(), valuation);
    case Kind::kAnd:
      for (const auto& c : f.children())
        if (!eval_ground(c, valuation)) return false;
      return true;
    case Kind::kOr:
      for (const auto& c : f.children())
        if (eval_ground(c, valuation)) return true;
      return false;
    case Kind::kExists:
    case Kind::kForall:
      throw InvalidArgument("eval_ground applied to a quantified formula");
  }
  return false;
}

namespace {

Formula nnf_rec(const Formula& f, bool negated) {
  switch (f.kind()) {
    case Kind::kTrue:
    case Kind::kFalse:
      return Formula::constant(f.is_true() != negated);
    case Kind::kLe:
      if (!negated) return f;
      return Formula::le(-f.expr() + LinearExpr(1));
    case Kind::kDvd:
      return negated ? Formula::negation(f) : f;
    case Kind::kNot:
      return nnf_rec(f.children().front(), !negated);
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) parts.push_back(nnf_rec(c, negated));
      bool conj = (f.kind() == Kind::kAnd) != negated;
      return conj ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case Kind::kExists:
    case Kind::kForall: {
      bool ex = (f.kind() == Kind::kExists) != negated;
      Formula body = nnf_rec(f.body(), negated);
      return ex ? Formula::exists(f.var(), std::move(body)) : Formula::forall(f.var(), std::move(body));
    }
  }
  return f;
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_rec(f, false); }

Formula negate(const Formula& f) { return nnf_rec(f, true); }

// ---------------------------------------------------------------------------

namespace {

LinearExpr substitute_expr(const LinearExpr& e, const std::map<VarId, LinearExpr>& m) {
  bool touched = false;
  for (const auto& [v, a] : e.terms())
    if (m.count(v)) {
      touched = true;
      break;
    }
  if (!touched) return e;
  LinearExpr out(e.constant());
  for (const auto& [v, a] : e.terms()) {
    auto it = m.find(v);
    if (it == m.end()) out.add_term(v, a);
    else out += it->second * a;
  }
  return out;
}

Formula substitute_rec(const Formula& f, const std::map<VarId, LinearExpr>& m) {
  if (m.empty()) return f;
  switch (f.kind()) {
    case Kind::kTrue:
    case Kind::kFalse:
      return f;
    case Kind::kLe:
      return Formula::le(substitute_expr(f.expr(), m));
    case Kind::kDvd:
      return Formula::dvd(f.modulus(), substitute_expr(f.expr(), m));
    case Kind::kNot:
      return Formula::negation(substitute_rec(f.children().front(), m));
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) parts.push_back(substitute_rec(c, m));
      return f.kind() == Kind::kAnd ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case Kind::kExists:
    case Kind::kForall: {
      VarId b = f.var();
      std::map<VarId, LinearExpr> inner = m;
      inner.erase(b);
      Formula body = f.body();
      bool capture = false;
      for (const auto& [v, e] : inner)
        if (e.mentions(b)) {
          capture = true;
          break;
        }
      if (capture) {
        VarId nb = fresh_var(var_name(b));
        body = substitute_rec(body, {{b, LinearExpr::variable(nb)}});
        b = nb;
      }
      body = substitute_rec(body, inner);
      return f.kind() == Kind::kExists ? Formula::exists(b, std::move(body)) : Formula::forall(b, std::move(body));
    }
  }
  return f;
}

Formula freshen_rec(const Formula& f, std::map<VarId, LinearExpr>& m) {
  switch (f.kind()) {
    case Kind::kExists:
    case Kind::kForall: {
      VarId nb = fresh_var(var_name(f.var()));
      auto saved = m.find(f.var()) != m.end() ? std::optional<LinearExpr>(m[f.var()]) : std::nullopt;
      m[f.var()] = LinearExpr::variable(nb);
      Formula body = freshen_rec(f.body(), m);
      if (saved) m[f.var()] = *saved;
      else m.erase(f.var());
      return f.kind() == Kind::kExists ? Formula::exists(nb, std::move(body)) : Formula::forall(nb, std::move(body));
    }
    case Kind::kNot:
      return Formula::negation(freshen_rec(f.children().front(), m));
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(freshen_rec(c, m));
      return f.kind() == Kind::kAnd ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case Kind::kLe:
      return Formula::le(substitute_expr(f.expr(), m));
    case Kind::kDvd:
      return Formula::dvd(f.modulus(), substitute_expr(f.expr(), m));
    default:
      return f;
  }
}

}  // namespace

Formula substitute(const Formula& f, const std::map<VarId, LinearExpr>& replacement) {
  return substitute_rec(f, replacement);
}

Formula rename(const Formula& f, const std::map<VarId, VarId>& renaming) {
  std::map<VarId, LinearExpr> m;
  for (const auto& [a, b] : renaming) m.emplace(a, LinearExpr::variable(b));
  return substitute_rec(f, m);
}

Formula freshen_bound(const Formula& f) {
  std::map<VarId, LinearExpr> m;
  return freshen_rec(f, m);
}

// ---------------------------------------------------------------------------

namespace {

using Block = std::pair<Quantifier, std::vector<VarId>>;

struct PrenexBlocks {
  std::vector<Block> blocks;
  Formula matrix;
};

std::vector<Block> merge_with_start(const std::vector<std::vector<Block>>& lists, Quantifier start) {
  std::vector<std::size_t> pos(lists.size(), 0);
  std::vector<Block> out;
  Quantifier current = start;
  for (;;) {
    bool remaining = false;
    for (std::size_t i = 0; i < lists.size(); ++i)
      if (pos[i] < lists[i].size()) remaining = true;
    if (!remaining) break;
    Block merged{current, {}};
    for (std::size_t i = 0; i < lists.size(); ++i) {
      if (pos[i] < lists[i].size() && lists[i][pos[i]].first == current) {
        const auto& vs = lists[i][pos[i]].second;
        merged.second.insert(merged.second.end(), vs.begin(), vs.end());
        ++pos[i];
      }
    }
    if (!merged.second.empty()) out.push_back(std::move(merged));
    current = current == Quantifier::kExists ? Quantifier::kForall : Quantifier::kExists;
  }
  return out;
}

std::vector<Block> merge_blocks(const std::vector<std::vector<Block>>& lists) {
  auto a = merge_with_start(lists, Quantifier::kExists);
  auto b = merge_with_start(lists, Quantifier::kForall);
  return b.size() < a.size() ? b : a;
}

PrenexBlocks prenex_rec(const Formula& f) {
  switch (f.kind()) {
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<std::vector<Block>> lists;
      std::vector<Formula> matrices;
      for (const auto& c : f.children()) {
        auto p = prenex_rec(c);
        lists.push_back(std::move(p.blocks));
        matrices.push_back(std::move(p.matrix));
      }
      PrenexBlocks out;
      out.blocks = merge_blocks(lists);
      out.matrix = f.kind() == Kind::kAnd ? Formula::conj(std::move(matrices)) : Formula::disj(std::move(matrices));
      return out;
    }
    case Kind::kExists:
    case Kind::kForall: {
      VarId nb = fresh_var(var_name(f.var()));
      Formula body = substitute(f.body(), {{f.var(), LinearExpr::variable(nb)}});
      auto inner = prenex_rec(body);
      Quantifier q = f.kind() == Kind::kExists ? Quantifier::kExists : Quantifier::kForall;
      if (!inner.blocks.empty() && inner.blocks.front().first == q) {
        inner.blocks.front().second.insert(inner.blocks.front().second.begin(), nb);
      } else {
        inner.blocks.insert(inner.blocks.begin(), Block{q, {nb}});
      }
      return inner;
    }
    default:
      return PrenexBlocks{{}, f};
  }
}

}  // namespace

Formula Prenex::to_formula() const {
  Formula out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->first == Quantifier::kExists ? Formula::exists(it->second, out) : Formula::forall(it->second, out);
  return out;
}

std::size_t Prenex::blocks() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (i == 0 || prefix[i].first != prefix[i - 1].first) ++n;
  return n;
}

Prenex prenex(const Formula& f) {
  auto p = prenex_rec(nnf(f));
  Prenex out;
  out.matrix = std::move(p.matrix);
  for (const auto& [q, vs] : p.blocks)
    for (VarId v : vs) out.prefix.emplace_back(q, v);
  return out;
}

Classification classify(const Formula& f) {
  auto p = prenex(f);
  Classification c;
  c.index = p.blocks();
  if (!p.prefix.empty() && p.prefix.front().first == Quantifier::kForall) c.polarity = Polarity::kPi;
  return c;
}

std::string to_string(const Classification& c) {
  return std::string(c.polarity == Polarity::kSigma ? "Sigma_" : "Pi_") + std::to_string(c.index);
}

// ---------------------------------------------------------------------------

namespace {

Formula normalize_le(const LinearExpr& e) {
  if (e.is_constant()) return Formula::constant(e.constant() <= 0);
  Int g = e.content();
  if (g == 1) return Formula::le(e);
  LinearExpr out(ceil_div(e.constant(), g));
  for (const auto& [v, a] : e.terms()) out.add_term(v, a / g);
  return Formula::le(std::move(out));
}

Formula normalize_dvd(const Int& m0, const LinearExpr& e) {
  Int m = abs(m0);
  if (m == 1) return Formula::top();
  LinearExpr r(mod(e.constant(), m));
  for (const auto& [v, a] : e.terms()) r.add_term(v, mod(a, m));
  if (r.is_constant()) return Formula::constant(r.constant() == 0);
  Int g = m;
  for (const auto& [v, a] : r.terms()) g = gcd(g, a);
  if (g > 1) {
    if (!divides(g, r.constant())) return Formula::bottom();
    LinearExpr s(r.constant() / g);
    for (const auto& [v, a] : r.terms()) s.add_term(v, a / g);
    return Formula::dvd(m / g, std::move(s));
  }
  return Formula::dvd(m, std::move(r));
}

Formula simplify_junction(Kind kind, std::vector<Formula> parts) {
  const bool is_and = kind == Kind::kAnd;
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (p.kind() == kind) {
      for (const auto& c : p.children()) flat.push_back(c);
    } else if (p.is_true()) {
      if (!is_and) return Formula::top();
    } else if (p.is_false()) {
      if (is_and) return Formula::bottom();
    } else {
      flat.push_back(std::move(p));
    }
  }
  // Inequalities over the same linear part: keep the strongest (and) / weakest (or) bound.
  std::map<LinearExpr, Int> bounds;  // linear part -> constant
  std::vector<Formula> others;
  std::unordered_set<Formula, FormulaHash> seen;
  for (auto& p : flat) {
    if (p.kind() == Kind::kLe) {
      LinearExpr lin = p.expr().without_constant();
      auto it = bounds.find(lin);
      if (it == bounds.end()) bounds.emplace(std::move(lin), p.expr().constant());
      else if (is_and ? p.expr().constant() > it->second : p.expr().constant() < it->second)
        it->second = p.expr().constant();
    } else if (seen.insert(p).second) {
      others.push_back(std::move(p));
    }
  }
  // Opposite bounds: L + c1 <= 0 and -L + c2 <= 0 mean c2 <= L <= -c1.
  for (const auto& [lin, c1] : bounds) {
    auto it = bounds.find(-lin);
    if (it == bounds.end()) continue;
    const Int& c2 = it->second;
    if (is_and && c2 > -c1) return Formula::bottom();
    if (!is_and && c2 <= -c1 + 1) return Formula::top();
  }
  for (const auto& p : others) {
    if (p.kind() == Kind::kNot && seen.count(p.children().front())) return Formula::constant(!is_and);
  }
  std::vector<Formula> out;
  out.reserve(bounds.size() + others.size());
  for (const auto& [lin, c] : bounds) out.push_back(Formula::le(lin + LinearExpr(c)));
  for (auto& p : others) out.push_back(std::move(p));
  return is_and ? Formula::conj(std::move(out)) : Formula::disj(std::move(out));
}

}  // namespace

Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case Kind::kTrue:
    case Kind::kFalse:
      return f;
    case Kind::kLe:
      return normalize_le(f.expr());
    case Kind::kDvd:
      return normalize_dvd(f.modulus(), f.expr());
    case Kind::kNot: {
      Formula c = simplify(f.children().front());
      if (c.kind() == Kind::kLe) return normalize_le(-c.expr() + LinearExpr(1));
      return Formula::negation(c);
    }
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) {
        Formula s = simplify(c);
        if (f.kind() == Kind::kAnd && s.is_false()) return s;
        if (f.kind() == Kind::kOr && s.is_true()) return s;
        parts.push_back(std::move(s));
      }
      return simplify_junction(f.kind(), std::move(parts));
    }
    case Kind::kExists:
    case Kind::kForall: {
      Formula body = simplify(f.body());
      if (body.is_true() || body.is_false()) return body;
      if (!free_vars(body).count(f.var())) return body;
      return f.kind() == Kind::kExists ? Formula::exists(f.var(), std::move(body))
                                       : Formula::forall(f.var(), std::move(body));
    }
  }
  return f;
}

}  // namespace twpa::presburger
