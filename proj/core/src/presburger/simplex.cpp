#include "simplex.hpp"

#include <gmpxx.h>

#include <map>
#include <optional>

namespace twpa::presburger {

namespace {

using Rational = mpq_class;
using Row = std::map<std::size_t, Rational>;

// General simplex with bounds on the slack variables only; Bland's rule throughout.
class Tableau {
 public:
  explicit Tableau(const std::vector<Constraint>& cs, bool divisibility = false) {
    std::map<VarId, std::size_t> index;
    for (const auto& c : cs)
      if (divisibility || c.type == Constraint::Type::kLe || c.type == Constraint::Type::kEq)
        for (const auto& [v, a] : c.expr.terms()) index.emplace(v, index.size());
    for (std::size_t i = 0; i < index.size(); ++i) add_var();
    for (const auto& [v, i] : index) columns_.emplace_back(v, i);
    for (const auto& c : cs) {
      const bool linear = c.type == Constraint::Type::kLe || c.type == Constraint::Type::kEq;
      if (!linear && !divisibility) continue;
      Row row;
      for (const auto& [v, a] : c.expr.terms()) row[index.at(v)] = Rational(a);
      const Rational bound = Rational(-c.expr.constant());
      switch (c.type) {
        case Constraint::Type::kLe: add_row(std::move(row), std::nullopt, bound); break;
        case Constraint::Type::kEq: add_row(std::move(row), bound, bound); break;
        case Constraint::Type::kDvd:
        case Constraint::Type::kNotDvd: {
          // e = m k (+ r with 1 <= r < m)
          row[add_var()] = Rational(-c.modulus);
          if (c.type == Constraint::Type::kNotDvd) {
            std::size_t r = add_var();
            row[r] = -1;
            add_row(Row{{r, Rational(1)}}, Rational(1), Rational(c.modulus - 1));
          }
          add_row(std::move(row), bound, bound);
          break;
        }
      }
    }
  }

  // A column that must be integral but is not, if any.
  std::optional<std::size_t> fractional() const {
    for (std::size_t v = 0; v < value_.size(); ++v)
      if (!is_slack_[v] && value_[v].get_den() != 1) return v;
    return std::nullopt;
  }

  // Tightens a column bound; the tableau stays consistent but may become infeasible.
  void bound(std::size_t v, std::optional<Rational> lo, std::optional<Rational> hi) {
    if (lo && (!lower_[v] || *lo > *lower_[v])) lower_[v] = lo;
    if (hi && (!upper_[v] || *hi < *upper_[v])) upper_[v] = hi;
    if (row_of_[v] != kNone) return;
    if (lower_[v] && value_[v] < *lower_[v]) update(v, *lower_[v]);
    else if (upper_[v] && value_[v] > *upper_[v]) update(v, *upper_[v]);
  }

  const Rational& value(std::size_t v) const { return value_[v]; }

  Valuation model() const {
    Valuation m;
    for (const auto& [var, i] : columns_) m[var] = value_[i].get_num();
    return m;
  }

  bool feasible() {
    for (;;) {
      std::optional<std::size_t> bad;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        std::size_t b = basic_[r];
        if (violated(b) && (!bad || b < basic_[*bad])) bad = r;
      }
      if (!bad) return true;
      const std::size_t r = *bad;
      const std::size_t b = basic_[r];
      const bool raise = lower_[b] && value_[b] < *lower_[b];
      std::optional<std::size_t> entering;
      for (const auto& [n, a] : rows_[r]) {
        const bool up = (a > 0) == raise;
        if (up ? can_increase(n) : can_decrease(n)) {
          entering = n;
          break;
        }
      }
      if (!entering) return false;
      pivot_and_update(r, *entering, raise ? *lower_[b] : *upper_[b]);
    }
  }

 private:
  std::size_t add_var(bool slack = false) {
    value_.emplace_back(0);
    lower_.emplace_back();
    upper_.emplace_back();
    row_of_.push_back(kNone);
    is_slack_.push_back(slack);
    return value_.size() - 1;
  }

  void add_row(Row row, std::optional<Rational> lo, std::optional<Rational> hi) {
    std::size_t s = add_var(true);
    Rational v = 0;
    for (const auto& [n, a] : row) v += a * value_[n];
    value_[s] = v;
    lower_[s] = std::move(lo);
    upper_[s] = std::move(hi);
    row_of_[s] = rows_.size();
    rows_.push_back(std::move(row));
    basic_.push_back(s);
  }

  // Moves non-basic v to target, keeping the basic variables consistent.
  void update(std::size_t v, const Rational& target) {
    const Rational theta = target - value_[v];
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      auto it = rows_[k].find(v);
      if (it != rows_[k].end()) value_[basic_[k]] += it->second * theta;
    }
    value_[v] = target;
  }

  bool violated(std::size_t v) const {
    return (lower_[v] && value_[v] < *lower_[v]) || (upper_[v] && value_[v] > *upper_[v]);
  }
  bool can_increase(std::size_t v) const { return !upper_[v] || value_[v] < *upper_[v]; }
  bool can_decrease(std::size_t v) const { return !lower_[v] || value_[v] > *lower_[v]; }

  void pivot_and_update(std::size_t r, std::size_t n, const Rational& target) {
    const std::size_t b = basic_[r];
    const Rational a = rows_[r].at(n);
    const Rational theta = (target - value_[b]) / a;
    value_[n] += theta;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      auto it = rows_[k].find(n);
      if (it != rows_[k].end()) value_[basic_[k]] += it->second * theta;
    }
    // b = a n + rest  =>  n = b / a - rest / a
    Row expr;
    expr[b] = 1 / a;
    for (const auto& [v, c] : rows_[r])
      if (v != n) expr[v] = -c / a;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (k == r) continue;
      auto it = rows_[k].find(n);
      if (it == rows_[k].end()) continue;
      const Rational c = it->second;
      rows_[k].erase(it);
      for (const auto& [v, e] : expr) {
        Rational& slot = rows_[k][v];
        slot += c * e;
        if (slot == 0) rows_[k].erase(v);
      }
    }
    rows_[r] = std::move(expr);
    basic_[r] = n;
    row_of_[n] = r;
    row_of_[b] = kNone;
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<Rational> value_;
  std::vector<std::optional<Rational>> lower_, upper_;
  std::vector<std::size_t> row_of_;
  std::vector<Row> rows_;
  std::vector<std::size_t> basic_;
  std::vector<bool> is_slack_;
  std::vector<std::pair<VarId, std::size_t>> columns_;
};

}  // namespace

bool rational_feasible(const std::vector<Constraint>& cs) { return Tableau(cs).feasible(); }

IntegerSearch integer_search(const std::vector<Constraint>& cs, std::size_t node_budget) {
  std::vector<Tableau> stack{Tableau(cs, true)};
  std::size_t nodes = 0;
  while (!stack.empty()) {
    if (nodes++ == node_budget) return {IntegerSearch::Result::kUnknown, {}};
    Tableau t = std::move(stack.back());
    stack.pop_back();
    if (!t.feasible()) continue;
    auto v = t.fractional();
    if (!v) return {IntegerSearch::Result::kModel, t.model()};
    const Rational& x = t.value(*v);
    Int lo = floor_div(x.get_num(), x.get_den());
    Tableau up = t;
    up.bound(*v, Rational(lo + 1), std::nullopt);
    t.bound(*v, std::nullopt, Rational(lo));
    stack.push_back(std::move(up));
    stack.push_back(std::move(t));
  }
  return {IntegerSearch::Result::kInfeasible, {}};
}

}  // namespace twpa::presburger
