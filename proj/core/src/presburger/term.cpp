#include "twpa/presburger/term.hpp"
#include "twpa/presburger/solver.hpp"

#include "twpa/error.hpp"
#include "twpa/presburger/syntax.hpp"

#include <optional>

namespace twpa::presburger {

Term Term::zero() { return Term(std::make_shared<const Node>(Node{Kind::kZero, 0, 0, nullptr, nullptr})); }
Term Term::one() { return Term(std::make_shared<const Node>(Node{Kind::kOne, 1, 0, nullptr, nullptr})); }

Term Term::constant(Int value) {
  if (value < 0) throw InvalidArgument("negative constant in surface term");
  return Term(std::make_shared<const Node>(Node{Kind::kConstant, std::move(value), 0, nullptr, nullptr}));
}

Term Term::variable(VarId v) { return Term(std::make_shared<const Node>(Node{Kind::kVariable, 0, v, nullptr, nullptr})); }

Term Term::sum(Term a, Term b) {
  return Term(std::make_shared<const Node>(
      Node{Kind::kSum, 0, 0, std::make_shared<const Term>(std::move(a)), std::make_shared<const Term>(std::move(b))}));
}

Term Term::twice(Term a) {
  return Term(std::make_shared<const Node>(Node{Kind::kDouble, 0, 0, std::make_shared<const Term>(std::move(a)), nullptr}));
}

std::size_t Term::size() const {
  switch (kind()) {
    case Kind::kSum: return 1 + left().size() + right().size();
    case Kind::kDouble: return 1 + left().size();
    default: return 1;
  }
}

LinearExpr linearize(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kZero: return LinearExpr(0);
    case Term::Kind::kOne: return LinearExpr(1);
    case Term::Kind::kConstant: return LinearExpr(t.value());
    case Term::Kind::kVariable: return LinearExpr::variable(t.var());
    case Term::Kind::kSum: return linearize(t.left()) + linearize(t.right());
    case Term::Kind::kDouble: return linearize(t.left()) * Int(2);
  }
  return LinearExpr(0);
}

Term binary_term(const Int& v) {
  if (v < 0) throw InvalidArgument("binary_term of a negative value");
  if (v == 0) return Term::zero();
  std::optional<Term> out;
  for (long bit = static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
    if (!mpz_tstbit(v.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) continue;
    Term power = Term::one();
    for (long i = 0; i < bit; ++i) power = Term::twice(power);
    out = out ? Term::sum(*out, power) : power;
  }
  return *out;
}

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kZero: return "0";
    case Term::Kind::kOne: return "1";
    case Term::Kind::kConstant: return t.value().get_str();
    case Term::Kind::kVariable: return var_name(t.var());
    case Term::Kind::kSum: return to_string(t.left()) + " + " + to_string(t.right());
    case Term::Kind::kDouble: return "2*(" + to_string(t.left()) + ")";
  }
  return "";
}

bool Sentence::value() const { return holds(formula, {}); }

Sentence substitute_constants(const Formula& psi, const Vector& v) {
  auto vars = dim_vars(v.size());
  std::map<VarId, LinearExpr> m;
  Valuation constants;
  for (std::size_t i = 0; i < v.size(); ++i) {
    m.emplace(vars[i], LinearExpr(v[i]));
    constants.emplace(vars[i], v[i]);
  }
  for (VarId x : free_vars(psi))
    if (!m.count(x)) throw InvalidArgument("free variable " + var_name(x) + " outside x1..x" + std::to_string(v.size()));
  PrintOptions options;
  options.binary_constants = true;
  options.constants = &constants;
  return {to_string(psi, options), simplify(substitute(psi, m))};
}

}  // namespace twpa::presburger
