#pragma once

#include "twpa/presburger/formula.hpp"

#include <memory>
#include <string>

namespace twpa::presburger {

/// Surface term over {0, 1, +, x2}; decimal constants are kept as sugar nodes.
class Term {
 public:
  enum class Kind : std::uint8_t { kZero, kOne, kConstant, kVariable, kSum, kDouble };

  static Term zero();
  static Term one();
  /// Decimal sugar for a nonnegative constant.
  static Term constant(Int value);
  static Term variable(VarId v);
  static Term sum(Term a, Term b);
  static Term twice(Term a);

  Kind kind() const { return node_->kind; }
  const Int& value() const { return node_->value; }
  VarId var() const { return node_->var; }
  const Term& left() const { return *node_->left; }
  const Term& right() const { return *node_->right; }

  /// Number of nodes; decimal sugar nodes count as one.
  std::size_t size() const;

 private:
  struct Node {
    Kind kind;
    Int value;
    VarId var = 0;
    std::shared_ptr<const Term> left, right;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

LinearExpr linearize(const Term& t);

/// Binary encoding of v >= 0 as a sum of powers of two, each power written as
/// nested doublings of 1; 13 becomes 2*(2*(2*(1))) + 2*(2*(1)) + 1.
Term binary_term(const Int& v);

/// Surface rendering (decimal sugar nodes print as decimals).
std::string to_string(const Term& t);

/// psi with x_i replaced by the constant v_i.
struct Sentence {
  /// Surface text in which every x_i is the binary term of |v_i|, placed on the side of
  /// each comparison that keeps it nonnegative.
  std::string text;
  /// Equivalent ground formula (constant folded).
  Formula formula;

  bool value() const;
};

/// Throws InvalidArgument when psi has a free variable outside x1..xd.
Sentence substitute_constants(const Formula& psi, const Vector& v);

}  // namespace twpa::presburger
