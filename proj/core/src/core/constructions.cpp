#include "twpa/constructions.hpp"

#include "twpa/error.hpp"
#include "twpa/presburger/semilinear.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace twpa {

using presburger::Formula;
using presburger::LinearExpr;
using presburger::dim_var;

namespace {

Formula zero_constraint(std::size_t d) {
  presburger::SemiLinearSet s{d, {presburger::LinearSet{zero_vector(d), {}}}};
  return presburger::semilinear_to_formula(s);
}

Vector unit(std::size_t d, std::size_t i, int value = 1) {
  Vector v = zero_vector(d);
  v[i] = value;
  return v;
}

}  // namespace

Automaton build_sweep() {
  Automaton a({"a", "b"}, 2);
  const Symbol sa = 0, sb = 1;
  StateId q0 = a.add_state("q0", Direction::kRight, true);
  StateId p1 = a.add_state("p1", Direction::kRight);
  StateId p2 = a.add_state("p2", Direction::kLeft);
  StateId p3 = a.add_state("p3", Direction::kRight);
  StateId p4 = a.add_state("p4", Direction::kRight);
  StateId qf = a.add_state("qf", Direction::kRight, false, true, true);
  a.add_transition(q0, kBegin, p1);
  a.add_transition(p1, sa, p1, unit(2, 0));
  a.add_transition(p1, sb, p1);
  a.add_transition(p1, kEnd, p2);
  a.add_transition(p2, kEnd, p2);
  a.add_transition(p2, sa, p2);
  a.add_transition(p2, sb, p2);
  a.add_transition(p2, kBegin, p3);
  a.add_transition(p3, kBegin, p4);
  a.add_transition(p4, sa, p4);
  a.add_transition(p4, sb, p4, unit(2, 1));
  a.add_transition(p4, kEnd, qf);
  a.set_constraint(Formula::eq(LinearExpr::variable(dim_var(1)), LinearExpr::variable(dim_var(2))));
  return a;
}

Automaton build_mismatch(std::size_t n) {
  Automaton a({"a", "b", "c", "#"}, 1);
  const Symbol sa = 0, sb = 1, sc = 2, sh = 3;
  StateId qi = a.add_state("qI", Direction::kRight, true);
  StateId qa = a.add_state("qa", Direction::kRight);
  StateId q0 = a.add_state("q0", Direction::kRight);
  StateId qf = a.add_state("qF", Direction::kRight, false, true, true);
  a.add_transition(qi, kBegin, qa);
  a.add_transition(qa, sa, qa, {Int(1)});
  a.add_transition(qa, sh, q0);
  a.add_transition(q0, kEnd, qf);
  if (n == 0) {
    a.add_transition(q0, sb, q0);
    a.add_transition(q0, sc, q0);
  } else {
    std::vector<StateId> p;
    for (std::size_t j = 1; j <= n; ++j) p.push_back(a.add_state("p" + std::to_string(j), Direction::kLeft));
    for (std::size_t j = 0; j + 1 < n; ++j) {
      a.add_transition(p[j], sb, p[j + 1]);
      a.add_transition(p[j], sc, p[j + 1]);
    }
    a.add_transition(p[n - 1], sb, q0);
    a.add_transition(p[n - 1], sc, q0);
    for (Symbol sigma : {sb, sc}) {
      std::string tag = sigma == sb ? "b" : "c";
      std::vector<StateId> q;
      for (std::size_t j = 1; j <= n; ++j)
        q.push_back(a.add_state("q" + std::to_string(j) + "_" + tag, Direction::kRight));
      a.add_transition(q0, sigma, q[0]);
      for (std::size_t j = 0; j + 1 < n; ++j) {
        a.add_transition(q[j], sb, q[j + 1]);
        a.add_transition(q[j], sc, q[j + 1]);
      }
      for (Symbol other : {sb, sc}) a.add_transition(q[n - 1], other, p[0], {Int(other == sigma ? 0 : -1)});
      for (StateId s : q) a.add_transition(s, kEnd, qf);
    }
  }
  a.set_constraint(zero_constraint(1));
  return a;
}

Automaton build_multiplication() {
  Automaton a({"a", "#"}, 2);
  const Symbol sa = 0, sh = 1;
  StateId q0 = a.add_state("q0", Direction::kRight, true);
  StateId q1 = a.add_state("q1", Direction::kRight);
  StateId q2 = a.add_state("q2", Direction::kRight);
  StateId q3 = a.add_state("q3", Direction::kRight);
  StateId q4 = a.add_state("q4", Direction::kRight, false, true, true);
  StateId q5 = a.add_state("q5", Direction::kLeft);
  a.add_transition(q0, kBegin, q1);
  a.add_transition(q1, sa, q1);
  a.add_transition(q1, sh, q2);
  a.add_transition(q2, sa, q2, unit(2, 1, -1));
  a.add_transition(q2, sh, q3);
  a.add_transition(q3, sa, q3, unit(2, 0, -1));
  a.add_transition(q3, kEnd, q4);
  a.add_transition(q1, sh, q5, unit(2, 1));
  a.add_transition(q5, sa, q5, unit(2, 0));
  a.add_transition(q5, sh, q5);
  a.add_transition(q5, kBegin, q0);
  a.set_constraint(zero_constraint(2));
  return a;
}

// ---------------------------------------------------------------------------

Polynomial Polynomial::constant(Int value) {
  if (value < 0) throw InvalidArgument("polynomial constants are natural numbers");
  return Polynomial(std::make_shared<const Node>(Node{Kind::kConstant, std::move(value), {}, nullptr, nullptr}));
}

Polynomial Polynomial::variable(std::string name) {
  if (name.empty()) throw InvalidArgument("empty variable name");
  return Polynomial(std::make_shared<const Node>(Node{Kind::kVariable, 0, std::move(name), nullptr, nullptr}));
}

Polynomial Polynomial::sum(Polynomial a, Polynomial b) {
  return Polynomial(std::make_shared<const Node>(Node{Kind::kSum, 0, {}, std::make_shared<const Polynomial>(std::move(a)),
                                                      std::make_shared<const Polynomial>(std::move(b))}));
}

Polynomial Polynomial::product(Polynomial a, Polynomial b) {
  return Polynomial(std::make_shared<const Node>(Node{Kind::kProduct, 0, {},
                                                      std::make_shared<const Polynomial>(std::move(a)),
                                                      std::make_shared<const Polynomial>(std::move(b))}));
}

std::string Polynomial::to_string() const {
  switch (kind()) {
    case Kind::kConstant: return value().get_str();
    case Kind::kVariable: return name();
    case Kind::kSum: return "(" + left().to_string() + "+" + right().to_string() + ")";
    case Kind::kProduct: return "(" + left().to_string() + "*" + right().to_string() + ")";
  }
  return "";
}

Int Polynomial::evaluate(const std::map<std::string, Int>& valuation) const {
  switch (kind()) {
    case Kind::kConstant: return value();
    case Kind::kVariable: {
      auto it = valuation.find(name());
      if (it == valuation.end()) throw InvalidArgument("unbound variable " + name());
      return it->second;
    }
    case Kind::kSum: return left().evaluate(valuation) + right().evaluate(valuation);
    case Kind::kProduct: return left().evaluate(valuation) * right().evaluate(valuation);
  }
  return 0;
}

std::vector<Polynomial> Polynomial::sub() const {
  std::vector<Polynomial> out;
  std::set<std::string> seen;
  auto walk = [&](auto&& self, const Polynomial& p) -> void {
    if (p.kind() == Kind::kSum || p.kind() == Kind::kProduct) {
      self(self, p.left());
      self(self, p.right());
    }
    if (seen.insert(p.to_string()).second) out.push_back(p);
  };
  walk(walk, *this);
  return out;
}

std::vector<std::string> Polynomial::variables() const {
  std::set<std::string> names;
  for (const auto& q : sub())
    if (q.kind() == Kind::kVariable) names.insert(q.name());
  return {names.begin(), names.end()};
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  Polynomial parse_all() {
    Polynomial p = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  Polynomial sum() {
    Polynomial p = product();
    while (accept('+')) p = Polynomial::sum(p, product());
    return p;
  }
  Polynomial product() {
    Polynomial p = atom();
    while (accept('*')) p = Polynomial::product(p, atom());
    return p;
  }
  Polynomial atom() {
    skip();
    if (accept('(')) {
      Polynomial p = sum();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Polynomial::constant(Int(std::string(s_.substr(start, pos_ - start))));
    }
    if (pos_ < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::islower(static_cast<unsigned char>(s_[pos_])) ||
                                  std::isdigit(static_cast<unsigned char>(s_[pos_]))))
        ++pos_;
      return Polynomial::variable(std::string(s_.substr(start, pos_ - start)));
    }
    fail(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "unexpected end of polynomial");
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at column " + std::to_string(pos_ + 1));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text) { return PolyParser(text).parse_all(); }

std::vector<Equation> parse_equations(std::string_view text) {
  std::vector<Equation> out;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto c = line.find("//"); c != std::string_view::npos) line = line.substr(0, c);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos || line.find('=', eq + 1) != std::string_view::npos)
      throw ParseError("expected exactly one '='", line_no);
    try {
      out.push_back({parse_polynomial(line.substr(0, eq)), parse_polynomial(line.substr(eq + 1))});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (out.empty()) throw ParseError("no equations");
  return out;
}

std::string zero_letter(const std::string& var) { return "0_" + var; }
std::string one_letter(const Polynomial& p) { return "1_" + p.to_string(); }

// ---------------------------------------------------------------------------
// Encodings are sequences of rightward counting passes over the whole input, separated by
// rewinds to BEGIN. A repeatable pass runs any number of times (including zero).

namespace {

struct Pass {
  std::vector<std::pair<std::string, std::size_t>> counts;  // letter -> dimension
  std::optional<std::size_t> end_dimension;                 // incremented when reading END
  bool repeatable = false;
};

struct Plan {
  std::vector<Pass> passes;
  std::vector<Formula> constraints;
  std::vector<std::string> names;  // per dimension
};

LinearExpr dim(std::size_t i) { return LinearExpr::variable(dim_var(i + 1)); }

std::size_t fresh_dim(Plan& plan, std::string name) {
  plan.names.push_back(std::move(name));
  return plan.names.size() - 1;
}

void plan_polynomial(const Polynomial& p, Plan& plan) {
  const std::string one = one_letter(p);
  switch (p.kind()) {
    case Polynomial::Kind::kConstant: {
      std::size_t c = fresh_dim(plan, "#" + one);
      plan.passes.push_back({{{one, c}}, std::nullopt, false});
      plan.constraints.push_back(Formula::eq(dim(c), LinearExpr(p.value())));
      return;
    }
    case Polynomial::Kind::kVariable: {
      std::size_t z = fresh_dim(plan, "#" + zero_letter(p.name()));
      std::size_t o = fresh_dim(plan, "#" + one);
      plan.passes.push_back({{{zero_letter(p.name()), z}, {one, o}}, std::nullopt, false});
      plan.constraints.push_back(Formula::eq(dim(z), dim(o)));
      return;
    }
    case Polynomial::Kind::kSum: {
      plan_polynomial(p.left(), plan);
      plan_polynomial(p.right(), plan);
      std::size_t a = fresh_dim(plan, "#" + one_letter(p.left()));
      std::size_t b = fresh_dim(plan, "#" + one_letter(p.right()));
      std::size_t s = fresh_dim(plan, "#" + one);
      plan.passes.push_back({{{one_letter(p.left()), a}, {one_letter(p.right()), b}, {one, s}}, std::nullopt, false});
      plan.constraints.push_back(Formula::eq(dim(a) + dim(b), dim(s)));
      return;
    }
    case Polynomial::Kind::kProduct: {
      plan_polynomial(p.left(), plan);
      plan_polynomial(p.right(), plan);
      std::size_t mult = fresh_dim(plan, "mult " + p.to_string());
      std::size_t pass = fresh_dim(plan, "passes " + p.to_string());
      std::size_t a = fresh_dim(plan, "#" + one_letter(p.left()));
      std::size_t s = fresh_dim(plan, "#" + one);
      plan.passes.push_back({{{one_letter(p.right()), mult}}, pass, true});
      plan.passes.push_back({{{one_letter(p.left()), a}, {one, s}}, std::nullopt, false});
      plan.constraints.push_back(Formula::eq(dim(pass), dim(a)));
      plan.constraints.push_back(Formula::eq(dim(mult), dim(s)));
      return;
    }
  }
}

Encoding materialize(const Plan& plan, const std::vector<std::string>& alphabet) {
  const std::size_t d = plan.names.size();
  Automaton a(alphabet, d);
  const std::size_t n = plan.passes.size();
  if (n == 0 || plan.passes.front().repeatable || plan.passes.back().repeatable)
    throw InvalidArgument("malformed pass plan");
  // entry[i] reads BEGIN into scan[i]; rewind[i] follows non-repeatable pass i.
  std::vector<StateId> entry(n), scan(n);
  std::vector<std::optional<StateId>> rewind(n);
  for (std::size_t i = 0; i < n; ++i) {
    entry[i] = a.add_state("e" + std::to_string(i), Direction::kRight, i == 0);
    scan[i] = a.add_state("s" + std::to_string(i), Direction::kRight);
    if (i + 1 < n && !plan.passes[i].repeatable) rewind[i] = a.add_state("r" + std::to_string(i), Direction::kLeft);
  }
  StateId accept = a.add_state("acc", Direction::kRight, false, true, true);
  for (std::size_t i = 0; i < n; ++i) {
    const Pass& pass = plan.passes[i];
    a.add_transition(entry[i], kBegin, scan[i]);
    for (Symbol s = 0; s < static_cast<Symbol>(alphabet.size()); ++s) {
      Vector w = zero_vector(d);
      for (const auto& [letter, k] : pass.counts)
        if (alphabet[static_cast<std::size_t>(s)] == letter) w[k] += 1;
      a.add_transition(scan[i], s, scan[i], w);
    }
    Vector end = zero_vector(d);
    if (pass.end_dimension) end[*pass.end_dimension] = 1;
    StateId after = i + 1 == n ? accept : pass.repeatable ? *rewind[i - 1] : *rewind[i];
    a.add_transition(scan[i], kEnd, after, end);
    if (rewind[i]) {
      StateId r = *rewind[i];
      a.add_transition(r, kEnd, r);
      for (Symbol s = 0; s < static_cast<Symbol>(alphabet.size()); ++s) a.add_transition(r, s, r);
      a.add_transition(r, kBegin, entry[i + 1]);
      if (plan.passes[i + 1].repeatable) a.add_transition(r, kBegin, entry[i + 2]);
    }
  }
  a.set_constraint(Formula::conj(plan.constraints));
  return {std::move(a), plan.names};
}

std::vector<std::string> encoding_alphabet(const std::vector<Polynomial>& roots) {
  std::set<std::string> vars;
  std::vector<std::string> ones;
  std::set<std::string> seen;
  for (const auto& r : roots) {
    for (const auto& v : r.variables()) vars.insert(v);
    for (const auto& q : r.sub())
      if (seen.insert(one_letter(q)).second) ones.push_back(one_letter(q));
  }
  std::vector<std::string> out;
  for (const auto& v : vars) out.push_back(zero_letter(v));
  out.insert(out.end(), ones.begin(), ones.end());
  return out;
}

}  // namespace

Encoding encode_polynomial(const Polynomial& p) {
  Plan plan;
  plan_polynomial(p, plan);
  return materialize(plan, encoding_alphabet({p}));
}

Encoding encode_system(const std::vector<Equation>& equations) {
  if (equations.empty()) throw InvalidArgument("empty equation system");
  Plan plan;
  std::vector<Polynomial> roots;
  for (const auto& e : equations) {
    roots.push_back(e.lhs);
    roots.push_back(e.rhs);
    plan_polynomial(e.lhs, plan);
    plan_polynomial(e.rhs, plan);
    std::size_t a = fresh_dim(plan, "#" + one_letter(e.lhs));
    std::size_t b = fresh_dim(plan, "#" + one_letter(e.rhs));
    Pass pass{{{one_letter(e.lhs), a}, {one_letter(e.rhs), b}}, std::nullopt, false};
    plan.passes.push_back(pass);
    plan.constraints.push_back(Formula::eq(dim(a), dim(b)));
  }
  return materialize(plan, encoding_alphabet(roots));
}

std::map<std::string, Int> encoded_valuation(const Automaton& a, const Word& w) {
  std::map<std::string, Int> nu;
  for (const auto& letter : a.alphabet())
    if (letter.rfind("0_", 0) == 0) nu[letter.substr(2)] = Int(count_letter(a, w, letter));
  return nu;
}

std::size_t count_letter(const Automaton& a, const Word& w, const std::string& name) {
  auto s = a.find_symbol(name);
  if (!s) return 0;
  return static_cast<std::size_t>(std::count(w.begin(), w.end(), *s));
}

}  // namespace twpa
