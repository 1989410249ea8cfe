#include "twpa/presburger/qe.hpp"

#include "twpa/error.hpp"

#include <optional>
#include <set>

namespace twpa::presburger {

namespace {

void scan_atoms(const Formula& f, VarId x, Int& delta) {
  switch (f.kind()) {
    case Kind::kLe:
    case Kind::kDvd: {
      Int a = f.expr().coefficient(x);
      if (a != 0) delta = lcm(delta, abs(a));
      return;
    }
    case Kind::kExists:
    case Kind::kForall:
      throw InvalidArgument("cooper_eliminate_one expects a quantifier-free body");
    default:
      for (const auto& c : f.children()) scan_atoms(c, x, delta);
  }
}

// Rewrites every atom so that x occurs with coefficient +-1, standing for delta * x.
Formula unitize(const Formula& f, VarId x, const Int& delta) {
  switch (f.kind()) {
    case Kind::kLe: {
      Int a = f.expr().coefficient(x);
      if (a == 0) return f;
      Int s = delta / abs(a);
      LinearExpr e = f.expr().without(x) * s;
      e.add_term(x, sgn(a));
      return Formula::le(std::move(e));
    }
    case Kind::kDvd: {
      Int a = f.expr().coefficient(x);
      if (a == 0) return f;
      Int s = delta / abs(a);
      LinearExpr e = f.expr().without(x) * s;
      e.add_term(x, sgn(a));
      if (a < 0) e *= Int(-1);
      return Formula::dvd(f.modulus() * s, std::move(e));
    }
    case Kind::kNot:
      return Formula::negation(unitize(f.children().front(), x, delta));
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(unitize(c, x, delta));
      return f.kind() == Kind::kAnd ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    default:
      return f;
  }
}

struct Bounds {
  std::set<LinearExpr> lower;  // x >= r recorded as r - 1
  std::set<LinearExpr> upper;  // x <= u recorded as u + 1
  Int modulus = 1;
};

void collect_bounds(const Formula& f, VarId x, Bounds& b) {
  switch (f.kind()) {
    case Kind::kLe: {
      Int a = f.expr().coefficient(x);
      if (a == -1) b.lower.insert(f.expr().without(x) - LinearExpr(1));
      else if (a == 1) b.upper.insert(-f.expr().without(x) + LinearExpr(1));
      return;
    }
    case Kind::kDvd:
      if (f.expr().mentions(x)) b.modulus = lcm(b.modulus, f.modulus());
      return;
    default:
      for (const auto& c : f.children()) collect_bounds(c, x, b);
  }
}

// Value of the formula as x tends to -infinity (toward_minus) or +infinity.
Formula at_infinity(const Formula& f, VarId x, bool toward_minus) {
  switch (f.kind()) {
    case Kind::kLe: {
      Int a = f.expr().coefficient(x);
      if (a == 0) return f;
      bool holds = (a > 0) == toward_minus;
      return Formula::constant(holds);
    }
    case Kind::kNot:
      return Formula::negation(at_infinity(f.children().front(), x, toward_minus));
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(at_infinity(c, x, toward_minus));
      return f.kind() == Kind::kAnd ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    default:
      return f;
  }
}

Formula exists_qf(VarId x, const Formula& body);

// Uses an equality with a unit coefficient on x to substitute it away.
std::optional<Formula> eliminate_by_equality(VarId x, const Formula& conj) {
  std::set<LinearExpr> les;
  for (const auto& c : conj.children())
    if (c.kind() == Kind::kLe && abs(c.expr().coefficient(x)) == 1) les.insert(c.expr());
  for (const auto& e : les) {
    if (!les.count(-e)) continue;
    Int a = e.coefficient(x);
    LinearExpr value = e.without(x) * Int(-a);
    return simplify(substitute(conj, {{x, value}}));
  }
  return std::nullopt;
}

Formula exists_qf(VarId x, const Formula& body0) {
  Formula body = simplify(nnf(body0));
  if (!free_vars(body).count(x)) return body;
  if (body.kind() == Kind::kOr) {
    std::vector<Formula> parts;
    for (const auto& c : body.children()) {
      Formula r = exists_qf(x, c);
      if (r.is_true()) return r;
      parts.push_back(std::move(r));
    }
    return simplify(Formula::disj(std::move(parts)));
  }
  if (body.kind() == Kind::kAnd) {
    std::vector<Formula> with, without;
    for (const auto& c : body.children()) (free_vars(c).count(x) ? with : without).push_back(c);
    if (!without.empty()) {
      without.push_back(exists_qf(x, Formula::conj(with)));
      return simplify(Formula::conj(std::move(without)));
    }
    if (auto r = eliminate_by_equality(x, body)) return *r;
  }
  return cooper_eliminate_one(x, body);
}

Formula eliminate_rec(const Formula& f) {
  switch (f.kind()) {
    case Kind::kNot:
      return negate(eliminate_rec(f.children().front()));
    case Kind::kAnd:
    case Kind::kOr: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(eliminate_rec(c));
      return simplify(f.kind() == Kind::kAnd ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts)));
    }
    case Kind::kExists:
      return exists_qf(f.var(), eliminate_rec(f.body()));
    case Kind::kForall:
      return negate(exists_qf(f.var(), negate(eliminate_rec(f.body()))));
    default:
      return simplify(f);
  }
}

}  // namespace

Formula cooper_eliminate_one(VarId x, const Formula& body0) {
  Formula body = simplify(nnf(body0));
  Int delta = 1;
  scan_atoms(body, x, delta);
  if (delta == 0 || !free_vars(body).count(x)) return body;
  Formula phi = unitize(body, x, delta);
  if (delta > 1) phi = Formula::conj(phi, Formula::dvd(delta, LinearExpr::variable(x)));
  phi = simplify(phi);
  if (!free_vars(phi).count(x)) return phi;

  Bounds b;
  collect_bounds(phi, x, b);
  const bool use_lower = b.lower.size() <= b.upper.size();
  const auto& points = use_lower ? b.lower : b.upper;
  Formula inf = simplify(at_infinity(phi, x, use_lower));

  std::vector<Formula> parts;
  for (Int j = 1; j <= b.modulus; ++j) {
    LinearExpr shift(use_lower ? j : Int(-j));
    Formula d = simplify(substitute(inf, {{x, shift}}));
    if (d.is_true()) return d;
    parts.push_back(std::move(d));
    for (const auto& p : points) {
      Formula e = simplify(substitute(phi, {{x, p + shift}}));
      if (e.is_true()) return e;
      parts.push_back(std::move(e));
    }
  }
  return simplify(Formula::disj(std::move(parts)));
}

Formula eliminate_all(const Formula& f) { return eliminate_rec(f); }

}  // namespace twpa::presburger
