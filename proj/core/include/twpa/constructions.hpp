#pragma once

#include "twpa/automaton.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace twpa {

/// 3-visit deterministic sweeper over {a, b}: counts a on a first rightward pass, returns
/// to BEGIN, counts b on a third pass. Constraint x1 = x2, so it accepts |w|_a = |w|_b.
Automaton build_sweep();

/// Deterministic automaton over {a, b, c, #} accepting a^k # u with k the number of
/// positions i with u[i] != u[i+n]. Dimension 1, constraint x1 = 0.
Automaton build_mismatch(std::size_t n);

/// Nondeterministic automaton over {a, #} accepting a^n # a^m # a^(n*m). Dimension 2,
/// constraint x1 = 0 /\ x2 = 0. Not bounded-visit.
Automaton build_multiplication();

/// Polynomial with natural coefficients.
class Polynomial {
 public:
  enum class Kind : std::uint8_t { kConstant, kVariable, kSum, kProduct };

  static Polynomial constant(Int value);
  static Polynomial variable(std::string name);
  static Polynomial sum(Polynomial a, Polynomial b);
  static Polynomial product(Polynomial a, Polynomial b);

  Kind kind() const { return node_->kind; }
  const Int& value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const Polynomial& left() const { return *node_->left; }
  const Polynomial& right() const { return *node_->right; }

  /// Canonical text: constants, names, and parenthesized "(p+q)" / "(p*q)".
  std::string to_string() const;

  Int evaluate(const std::map<std::string, Int>& valuation) const;

  /// Subpolynomials, listed in post order without repetition.
  std::vector<Polynomial> sub() const;
  std::vector<std::string> variables() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.to_string() == b.to_string(); }

 private:
  struct Node {
    Kind kind;
    Int value;
    std::string name;
    std::shared_ptr<const Polynomial> left, right;
  };
  explicit Polynomial(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Equation {
  Polynomial lhs, rhs;
};

/// Infix polynomial syntax: naturals, names, +, *, parentheses.
Polynomial parse_polynomial(std::string_view text);
/// One "p = q" per line; blank lines and "//" comments are skipped.
std::vector<Equation> parse_equations(std::string_view text);

/// Letter counting x under nu_w.
std::string zero_letter(const std::string& var);
/// Letter counting p.
std::string one_letter(const Polynomial& p);

struct Encoding {
  Automaton automaton;
  /// What each dimension counts, in order.
  std::vector<std::string> dimension_names;
};

/// Automaton accepting a good encoding of p over {0_x} and {1_q : q in sub(p)}.
Encoding encode_polynomial(const Polynomial& p);

/// Automaton that is nonempty iff the system has a solution over the naturals.
Encoding encode_system(const std::vector<Equation>& equations);

/// nu_w: the number of 0_x letters per variable.
std::map<std::string, Int> encoded_valuation(const Automaton& a, const Word& w);

/// Occurrences of the letter named name in w.
std::size_t count_letter(const Automaton& a, const Word& w, const std::string& name);

}  // namespace twpa
