#pragma once

#include "twpa/presburger/linear.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <vector>

namespace twpa::presburger {

enum class Kind : std::uint8_t { kTrue, kFalse, kLe, kDvd, kNot, kAnd, kOr, kExists, kForall };

/// Immutable formula tree. Atoms are `e <= 0` (kLe) and `m | e` (kDvd, m >= 1).
/// Equality and strict order are sugar built from kLe.
class Formula {
 public:
  Formula();  // true

  static Formula top();
  static Formula bottom();
  static Formula constant(bool value) { return value ? top() : bottom(); }
  /// e <= 0
  static Formula le(LinearExpr e);
  /// a <= b
  static Formula le(const LinearExpr& a, const LinearExpr& b);
  static Formula lt(const LinearExpr& a, const LinearExpr& b);
  static Formula ge(const LinearExpr& a, const LinearExpr& b) { return le(b, a); }
  static Formula gt(const LinearExpr& a, const LinearExpr& b) { return lt(b, a); }
  /// a <= b /\ b <= a
  static Formula eq(const LinearExpr& a, const LinearExpr& b);
  static Formula dvd(Int modulus, LinearExpr e);
  static Formula negation(Formula f);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{std::move(a), std::move(b)}); }
  static Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{std::move(a), std::move(b)}); }
  static Formula implies(Formula a, Formula b) { return disj(negation(std::move(a)), std::move(b)); }
  static Formula iff(Formula a, Formula b);
  static Formula exists(VarId v, Formula body);
  static Formula forall(VarId v, Formula body);
  static Formula exists(const std::vector<VarId>& vs, Formula body);
  static Formula forall(const std::vector<VarId>& vs, Formula body);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::kTrue; }
  bool is_false() const { return kind() == Kind::kFalse; }
  bool is_atom() const { return kind() == Kind::kLe || kind() == Kind::kDvd; }
  bool is_quantifier() const { return kind() == Kind::kExists || kind() == Kind::kForall; }
  /// Atom expression (kLe, kDvd).
  const LinearExpr& expr() const;
  /// Divisibility modulus (kDvd).
  const Int& modulus() const;
  /// Operands of kNot (one), kAnd, kOr, and the body of quantifiers (one).
  const std::vector<Formula>& children() const;
  const Formula& body() const { return children().front(); }
  /// Bound variable of a quantifier.
  VarId var() const;

  bool is_quantifier_free() const;
  std::size_t size() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b);

  struct Node;

 private:
  static Formula junction(Kind kind, std::vector<Formula> parts);
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

std::set<VarId> free_vars(const Formula& f);

/// Truth value of a quantifier-free formula. Throws InvalidArgument on quantifiers or
/// unbound variables.
bool eval_ground(const Formula& f, const Valuation& valuation);

/// Negation normal form: negations only directly above divisibility atoms; negated
/// inequalities are turned into inequalities.
Formula nnf(const Formula& f);

/// Negation-normal-form formula equivalent to the negation of f.
Formula negate(const Formula& f);

/// Capture-avoiding replacement of free variables by linear expressions.
Formula substitute(const Formula& f, const std::map<VarId, LinearExpr>& replacement);
Formula rename(const Formula& f, const std::map<VarId, VarId>& renaming);

/// Gives every bound variable a fresh identity (needed before combining copies of one formula).
Formula freshen_bound(const Formula& f);

enum class Quantifier : std::uint8_t { kExists, kForall };

struct Prenex {
  std::vector<std::pair<Quantifier, VarId>> prefix;
  Formula matrix;  // quantifier free, negation normal form

  Formula to_formula() const;
  /// Number of maximal blocks of equal quantifiers.
  std::size_t blocks() const;
};

/// Prenex normal form; quantifiers of independent subformulas are interleaved so that the
/// number of alternation blocks is minimal for the merge.
Prenex prenex(const Formula& f);

enum class Polarity : std::uint8_t { kSigma, kPi };

struct Classification {
  std::size_t index = 0;
  Polarity polarity = Polarity::kSigma;

  friend bool operator==(const Classification&, const Classification&) = default;
};

Classification classify(const Formula& f);
std::string to_string(const Classification& c);

/// Equivalence preserving clean-up: folds ground atoms, normalizes atoms by their content,
/// flattens and deduplicates connectives, absorbs constants.
Formula simplify(const Formula& f);

}  // namespace twpa::presburger
