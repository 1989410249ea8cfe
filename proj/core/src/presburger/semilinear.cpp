#include "twpa/presburger/semilinear.hpp"

#include "twpa/error.hpp"
#include "twpa/presburger/solver.hpp"

namespace twpa::presburger {

void SemiLinearSet::check() const {
  for (const auto& c : components) {
    if (c.base.size() != dimension) throw InvalidArgument("base vector has the wrong dimension");
    for (const auto& p : c.periods)
      if (p.size() != dimension) throw InvalidArgument("period vector has the wrong dimension");
  }
}

Formula semilinear_to_formula(const SemiLinearSet& s) { return semilinear_to_formula(s, dim_vars(s.dimension)); }

Formula semilinear_to_formula(const SemiLinearSet& s, const std::vector<VarId>& vars) {
  s.check();
  if (vars.size() != s.dimension) throw InvalidArgument("variable list does not match the dimension");
  std::vector<Formula> options;
  for (const auto& c : s.components) {
    std::vector<VarId> mult;
    std::vector<Formula> parts;
    for (std::size_t j = 0; j < c.periods.size(); ++j) {
      mult.push_back(fresh_var("m"));
      parts.push_back(Formula::le(LinearExpr(0), LinearExpr::variable(mult.back())));
    }
    for (std::size_t k = 0; k < s.dimension; ++k) {
      LinearExpr rhs(c.base[k]);
      for (std::size_t j = 0; j < c.periods.size(); ++j) rhs.add_term(mult[j], c.periods[j][k]);
      parts.push_back(Formula::eq(LinearExpr::variable(vars[k]), rhs));
    }
    options.push_back(Formula::exists(mult, Formula::conj(std::move(parts))));
  }
  return Formula::disj(std::move(options));
}

bool member_semilinear(const SemiLinearSet& s, const Vector& v) {
  s.check();
  if (v.size() != s.dimension) throw InvalidArgument("vector has the wrong dimension");
  Valuation val;
  auto vars = dim_vars(s.dimension);
  for (std::size_t k = 0; k < v.size(); ++k) val[vars[k]] = v[k];
  for (const auto& c : s.components) {
    SemiLinearSet single{s.dimension, {c}};
    if (holds(semilinear_to_formula(single, vars), val)) return true;
  }
  return false;
}

}  // namespace twpa::presburger
