#pragma once

#include "twpa/integer.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twpa::presburger {

using VarId = std::uint32_t;

/// Variables are interned. A named variable is shared by every occurrence of its name;
/// a fresh variable is distinct from every other variable and only borrows a display name.
VarId named_var(std::string_view name);
VarId fresh_var(std::string_view base);
std::string var_name(VarId v);
bool is_fresh(VarId v);

/// The dimension variables x1..xd of acceptance constraints.
VarId dim_var(std::size_t index);
std::vector<VarId> dim_vars(std::size_t d);

using Valuation = std::map<VarId, Int>;

/// Sum of a_i * x_i plus a constant, with sorted variables and no zero coefficients.
class LinearExpr {
 public:
  using Term = std::pair<VarId, Int>;

  LinearExpr() = default;
  LinearExpr(Int constant) : constant_(std::move(constant)) {}  // NOLINT
  LinearExpr(long constant) : constant_(constant) {}            // NOLINT
  LinearExpr(int constant) : constant_(constant) {}             // NOLINT

  static LinearExpr variable(VarId v, Int coefficient = 1);

  const std::vector<Term>& terms() const { return terms_; }
  const Int& constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }
  Int coefficient(VarId v) const;
  bool mentions(VarId v) const;

  /// gcd of the variable coefficients, 0 when constant.
  Int content() const;

  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(const Int& k);
  LinearExpr& add_term(VarId v, const Int& a);
  LinearExpr& add_constant(const Int& c) {
    constant_ += c;
    return *this;
  }

  /// The expression without the term for v.
  LinearExpr without(VarId v) const;
  LinearExpr without_constant() const;
  LinearExpr substitute(VarId v, const LinearExpr& replacement) const;

  /// Throws InvalidArgument when a variable is missing from the valuation.
  Int evaluate(const Valuation& valuation) const;

  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator-(LinearExpr a) { return a *= Int(-1); }
  friend LinearExpr operator*(LinearExpr a, const Int& k) { return a *= k; }
  friend LinearExpr operator*(const Int& k, LinearExpr a) { return a *= k; }

  friend bool operator==(const LinearExpr& a, const LinearExpr& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const LinearExpr& a, const LinearExpr& b) { return !(a == b); }
  friend bool operator<(const LinearExpr& a, const LinearExpr& b);

  std::size_t hash() const;

 private:
  std::vector<Term> terms_;
  Int constant_ = 0;
};

/// Readable debug rendering such as "3*x - y + 2".
std::string debug_string(const LinearExpr& e);

}  // namespace twpa::presburger
