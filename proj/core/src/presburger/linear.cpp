#include "twpa/presburger/linear.hpp"

#include "twpa/error.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace twpa::presburger {

namespace {

struct VarTable {
  std::mutex mutex;
  std::deque<std::string> names;
  std::deque<bool> fresh;
  std::unordered_map<std::string, VarId> by_name;
};

VarTable& table() {
  static VarTable t;
  return t;
}

}  // namespace

VarId named_var(std::string_view name) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  std::string key(name);
  auto it = t.by_name.find(key);
  if (it != t.by_name.end()) return it->second;
  auto id = static_cast<VarId>(t.names.size());
  t.names.push_back(key);
  t.fresh.push_back(false);
  t.by_name.emplace(std::move(key), id);
  return id;
}

VarId fresh_var(std::string_view base) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  auto id = static_cast<VarId>(t.names.size());
  t.names.emplace_back(base.empty() ? std::string("v") : std::string(base));
  t.fresh.push_back(true);
  return id;
}

std::string var_name(VarId v) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  if (v >= t.names.size()) return "?" + std::to_string(v);
  return t.names[v];
}

bool is_fresh(VarId v) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  return v < t.fresh.size() && t.fresh[v];
}

VarId dim_var(std::size_t index) { return named_var("x" + std::to_string(index)); }

std::vector<VarId> dim_vars(std::size_t d) {
  std::vector<VarId> out;
  out.reserve(d);
  for (std::size_t i = 1; i <= d; ++i) out.push_back(dim_var(i));
  return out;
}

LinearExpr LinearExpr::variable(VarId v, Int coefficient) {
  LinearExpr e;
  if (coefficient != 0) e.terms_.emplace_back(v, std::move(coefficient));
  return e;
}

Int LinearExpr::coefficient(VarId v) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), v,
                             [](const Term& t, VarId x) { return t.first < x; });
  if (it != terms_.end() && it->first == v) return it->second;
  return 0;
}

bool LinearExpr::mentions(VarId v) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), v,
                             [](const Term& t, VarId x) { return t.first < x; });
  return it != terms_.end() && it->first == v;
}

Int LinearExpr::content() const {
  Int g = 0;
  for (const auto& [v, a] : terms_) {
    g = gcd(g, a);
    if (g == 1) break;
  }
  return g;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  constant_ += other.constant_;
  if (other.terms_.empty()) return *this;
  if (terms_.empty()) {
    terms_ = other.terms_;
    return *this;
  }
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      Int sum = a->second + b->second;
      if (sum != 0) merged.emplace_back(a->first, std::move(sum));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  LinearExpr neg = other;
  neg *= Int(-1);
  return *this += neg;
}

LinearExpr& LinearExpr::operator*=(const Int& k) {
  if (k == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& t : terms_) t.second *= k;
  constant_ *= k;
  return *this;
}

LinearExpr& LinearExpr::add_term(VarId v, const Int& a) {
  if (a == 0) return *this;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), v,
                             [](const Term& t, VarId x) { return t.first < x; });
  if (it != terms_.end() && it->first == v) {
    it->second += a;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term(v, a));
  }
  return *this;
}

LinearExpr LinearExpr::without(VarId v) const {
  LinearExpr e;
  e.constant_ = constant_;
  e.terms_.reserve(terms_.size());
  for (const auto& t : terms_)
    if (t.first != v) e.terms_.push_back(t);
  return e;
}

LinearExpr LinearExpr::without_constant() const {
  LinearExpr e = *this;
  e.constant_ = 0;
  return e;
}

LinearExpr LinearExpr::substitute(VarId v, const LinearExpr& replacement) const {
  Int a = coefficient(v);
  if (a == 0) return *this;
  LinearExpr e = without(v);
  e += replacement * a;
  return e;
}

Int LinearExpr::evaluate(const Valuation& valuation) const {
  Int value = constant_;
  for (const auto& [v, a] : terms_) {
    auto it = valuation.find(v);
    if (it == valuation.end()) throw InvalidArgument("unbound variable " + var_name(v));
    value += a * it->second;
  }
  return value;
}

bool operator<(const LinearExpr& a, const LinearExpr& b) {
  if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].first != b.terms_[i].first) return a.terms_[i].first < b.terms_[i].first;
    if (a.terms_[i].second != b.terms_[i].second) return a.terms_[i].second < b.terms_[i].second;
  }
  return a.constant_ < b.constant_;
}

std::size_t LinearExpr::hash() const {
  std::size_t h = IntHash()(constant_);
  for (const auto& [v, a] : terms_) h = (h * 31 + v) * 1000003u ^ IntHash()(a);
  return h;
}

std::string debug_string(const LinearExpr& e) {
  std::string out;
  for (const auto& [v, a] : e.terms()) {
    if (out.empty()) {
      if (a == -1) out += "-";
      else if (a != 1) out += a.get_str() + "*";
    } else {
      out += a < 0 ? " - " : " + ";
      Int m = abs(a);
      if (m != 1) out += m.get_str() + "*";
    }
    out += var_name(v);
  }
  if (out.empty()) return e.constant().get_str();
  if (e.constant() > 0) out += " + " + e.constant().get_str();
  if (e.constant() < 0) out += " - " + Int(-e.constant()).get_str();
  return out;
}

}  // namespace twpa::presburger
