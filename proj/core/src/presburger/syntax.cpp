#include "twpa/presburger/syntax.hpp"

#include "twpa/error.hpp"
#include "twpa/presburger/term.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <variant>

namespace twpa::presburger {

namespace {

enum class Tok {
  kEnd, kIdent, kInt, kLParen, kRParen, kDot, kComma, kAnd, kOr, kNot,
  kLe, kLt, kEq, kGe, kGt, kPlus, kStar, kBar, kExists, kForall, kTrue, kFalse
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(s.substr(i, len)), i + 1});
    i += len;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::kInt, j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word(s.substr(i, j - i));
      Tok k = Tok::kIdent;
      if (word == "exists") k = Tok::kExists;
      else if (word == "forall") k = Tok::kForall;
      else if (word == "true") k = Tok::kTrue;
      else if (word == "false") k = Tok::kFalse;
      push(k, j - i);
    } else if (s.substr(i, 2) == "/\\") {
      push(Tok::kAnd, 2);
    } else if (s.substr(i, 2) == "\\/") {
      push(Tok::kOr, 2);
    } else if (s.substr(i, 2) == "<=") {
      push(Tok::kLe, 2);
    } else if (s.substr(i, 2) == ">=") {
      push(Tok::kGe, 2);
    } else {
      switch (c) {
        case '(': push(Tok::kLParen, 1); break;
        case ')': push(Tok::kRParen, 1); break;
        case '.': push(Tok::kDot, 1); break;
        case ',': push(Tok::kComma, 1); break;
        case '~': push(Tok::kNot, 1); break;
        case '<': push(Tok::kLt, 1); break;
        case '>': push(Tok::kGt, 1); break;
        case '=': push(Tok::kEq, 1); break;
        case '+': push(Tok::kPlus, 1); break;
        case '*': push(Tok::kStar, 1); break;
        case '|': push(Tok::kBar, 1); break;
        default:
          throw ParseError("unexpected character '" + std::string(1, c) + "' at column " + std::to_string(i + 1));
      }
    }
  }
  out.push_back({Tok::kEnd, "", s.size() + 1});
  return out;
}

using Value = std::variant<LinearExpr, Formula>;

class Parser {
 public:
  Parser(std::string_view text, bool allow_binders) : toks_(tokenize(text)), allow_binders_(allow_binders) {}

  Value parse_all() {
    Value v = expr();
    if (peek().kind != Tok::kEnd) fail("unexpected '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at column " + std::to_string(peek().column));
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }

  Formula as_formula(Value v) {
    if (auto* f = std::get_if<Formula>(&v)) return *f;
    fail("expected a formula, found a term");
  }
  LinearExpr as_term(Value v) {
    if (auto* e = std::get_if<LinearExpr>(&v)) return *e;
    fail("expected a term, found a formula");
  }

  Value expr() {
    if (peek().kind == Tok::kExists || peek().kind == Tok::kForall) return quantified();
    return disjunction();
  }

  Value quantified() {
    bool ex = next().kind == Tok::kExists;
    std::vector<std::pair<std::string, VarId>> bound;
    do {
      if (peek().kind != Tok::kIdent) fail("expected a variable name");
      std::string name = next().text;
      bound.emplace_back(name, fresh_var(name));
    } while (accept(Tok::kComma) || peek().kind == Tok::kIdent);
    expect(Tok::kDot, "'.'");
    for (const auto& [name, id] : bound) scope_.emplace_back(name, id);
    Formula body = as_formula(expr());
    scope_.resize(scope_.size() - bound.size());
    std::vector<VarId> ids;
    for (const auto& b : bound) ids.push_back(b.second);
    return ex ? Formula::exists(ids, body) : Formula::forall(ids, body);
  }

  Value disjunction() {
    Value first = conjunction();
    if (peek().kind != Tok::kOr) return first;
    std::vector<Formula> parts{as_formula(first)};
    while (accept(Tok::kOr)) parts.push_back(as_formula(conjunction()));
    return Formula::disj(std::move(parts));
  }

  Value conjunction() {
    Value first = negation();
    if (peek().kind != Tok::kAnd) return first;
    std::vector<Formula> parts{as_formula(first)};
    while (accept(Tok::kAnd)) parts.push_back(as_formula(negation()));
    return Formula::conj(std::move(parts));
  }

  Value negation() {
    if (accept(Tok::kNot)) return Formula::negation(as_formula(negation()));
    if (peek().kind == Tok::kExists || peek().kind == Tok::kForall) return quantified();
    return relation();
  }

  Value relation() {
    bool literal = peek().kind == Tok::kInt;
    Value lhs = sum();
    if (literal && std::holds_alternative<LinearExpr>(lhs) && peek().kind == Tok::kBar) {
      next();
      LinearExpr m = std::get<LinearExpr>(lhs);
      if (!m.is_constant() || m.constant() < 1) fail("divisibility modulus must be a positive literal");
      return Formula::dvd(m.constant(), as_term(sum()));
    }
    Tok k = peek().kind;
    if (k != Tok::kLe && k != Tok::kLt && k != Tok::kEq && k != Tok::kGe && k != Tok::kGt) return lhs;
    next();
    LinearExpr a = as_term(lhs);
    LinearExpr b = as_term(sum());
    switch (k) {
      case Tok::kLe: return Formula::le(a, b);
      case Tok::kLt: return Formula::lt(a, b);
      case Tok::kEq: return Formula::eq(a, b);
      case Tok::kGe: return Formula::ge(a, b);
      default: return Formula::gt(a, b);
    }
  }

  Value sum() {
    Value first = primary();
    if (peek().kind != Tok::kPlus) return first;
    LinearExpr acc = as_term(first);
    while (accept(Tok::kPlus)) acc += as_term(primary());
    return acc;
  }

  Value primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kInt: {
        Int n(next().text);
        if (accept(Tok::kStar)) return LinearExpr(as_term(primary()) * n);
        return LinearExpr(n);
      }
      case Tok::kIdent: {
        std::string name = next().text;
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
          if (it->first == name) return LinearExpr::variable(it->second);
        return LinearExpr::variable(named_var(name));
      }
      case Tok::kTrue: next(); return Formula::top();
      case Tok::kFalse: next(); return Formula::bottom();
      case Tok::kLParen: {
        next();
        Value v = expr();
        expect(Tok::kRParen, "')'");
        return v;
      }
      default:
        fail(t.kind == Tok::kEnd ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool allow_binders_;
  std::vector<std::pair<std::string, VarId>> scope_;
};

// ---------------------------------------------------------------------------

std::string multiple(const Int& a, const std::string& atom) {
  if (a == 1) return atom;
  Int q = a / 2;
  bool odd = a % 2 != 0;
  std::string out = "2*(" + multiple(q, atom) + ")";
  if (odd) out += " + " + atom;
  return out;
}

std::string render_constant(const Int& c, const PrintOptions& o) {
  return o.binary_constants ? to_string(binary_term(c)) : c.get_str();
}

class Printer {
 public:
  Printer(const Formula& root, const PrintOptions& o) : options_(o) {
    for (VarId v : free_vars(root)) {
      std::string base = var_name(v);
      std::string name = base;
      for (int k = 1; used_.count(name); ++k) name = base + std::to_string(k);
      used_.insert(name);
      names_[v] = name;
    }
  }

  enum class Ctx { kTop, kOr, kAnd, kNot };

  std::string print(const Formula& f, Ctx ctx) {
    switch (f.kind()) {
      case Kind::kTrue: return "true";
      case Kind::kFalse: return "false";
      case Kind::kLe: return le(f.expr());
      case Kind::kDvd: return dvd(f.modulus(), f.expr(), ctx);
      case Kind::kNot: return "~(" + print(f.children().front(), Ctx::kTop) + ")";
      case Kind::kAnd:
      case Kind::kOr: {
        bool is_and = f.kind() == Kind::kAnd;
        std::string out;
        for (const auto& c : f.children()) {
          if (!out.empty()) out += is_and ? " /\\ " : " \\/ ";
          out += print(c, is_and ? Ctx::kAnd : Ctx::kOr);
        }
        bool paren = ctx == Ctx::kNot || (ctx == Ctx::kAnd && !is_and);
        return paren ? "(" + out + ")" : out;
      }
      case Kind::kExists:
      case Kind::kForall: {
        std::string base = var_name(f.var());
        std::string name = base;
        for (int k = 1; used_.count(name); ++k) name = base + std::to_string(k);
        used_.insert(name);
        auto saved = names_.find(f.var()) != names_.end() ? std::optional<std::string>(names_[f.var()]) : std::nullopt;
        names_[f.var()] = name;
        std::string out = (f.kind() == Kind::kExists ? "exists " : "forall ") + name + ". " + print(f.body(), Ctx::kTop);
        used_.erase(name);
        if (saved) names_[f.var()] = *saved;
        else names_.erase(f.var());
        return ctx == Ctx::kTop ? out : "(" + out + ")";
      }
    }
    return "";
  }

  std::string term(const LinearExpr& e) {
    std::string out;
    for (const auto& [v, a] : e.terms()) {
      if (!out.empty()) out += " + ";
      out += multiple(a, name(v));
    }
    if (e.constant() != 0 || out.empty()) {
      if (!out.empty()) out += " + ";
      out += render_constant(e.constant(), options_);
    }
    return out;
  }

 private:
  std::string name(VarId v) {
    auto it = names_.find(v);
    return it == names_.end() ? var_name(v) : it->second;
  }

  std::string le(const LinearExpr& e) {
    LinearExpr lhs, rhs;
    std::string lhs_fixed, rhs_fixed;
    for (const auto& [v, a] : e.terms()) {
      if (auto c = fixed(v)) {
        Int p = a * *c;
        if (p == 0) continue;
        std::string& side = p > 0 ? lhs_fixed : rhs_fixed;
        if (!side.empty()) side += " + ";
        side += multiple(abs(a), render_constant(abs(*c), options_));
        continue;
      }
      if (a > 0) lhs.add_term(v, a);
      else rhs.add_term(v, -a);
    }
    if (e.constant() > 0) lhs.add_constant(e.constant());
    else rhs.add_constant(-e.constant());
    return join(lhs, lhs_fixed) + " <= " + join(rhs, rhs_fixed);
  }

  std::string join(const LinearExpr& e, const std::string& fixed_part) {
    if (fixed_part.empty()) return term(e);
    if (e.is_constant() && e.constant() == 0) return fixed_part;
    return fixed_part + " + " + term(e);
  }

  std::optional<Int> fixed(VarId v) const {
    if (!options_.constants) return std::nullopt;
    auto it = options_.constants->find(v);
    if (it == options_.constants->end()) return std::nullopt;
    return it->second;
  }

  std::string dvd(const Int& m, const LinearExpr& e, Ctx) {
    LinearExpr r(mod(e.constant(), m));
    for (const auto& [v, a] : e.terms()) {
      if (auto c = fixed(v)) r.add_constant(a * *c);
      else r.add_term(v, mod(a, m));
    }
    r = r.without_constant() + LinearExpr(mod(r.constant(), m));
    return m.get_str() + " | " + term(r);
  }

  PrintOptions options_;
  std::set<std::string> used_;
  std::map<VarId, std::string> names_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text, true);
  Value v = p.parse_all();
  if (auto* f = std::get_if<Formula>(&v)) return *f;
  throw ParseError("expected a formula, found a term");
}

LinearExpr parse_linear(std::string_view text) {
  Parser p(text, false);
  Value v = p.parse_all();
  if (auto* e = std::get_if<LinearExpr>(&v)) return *e;
  throw ParseError("expected a term, found a formula");
}

std::string to_string(const Formula& f, const PrintOptions& options) {
  Printer p(f, options);
  return p.print(f, Printer::Ctx::kTop);
}

std::string surface_term(const LinearExpr& e, const PrintOptions& options) {
  Printer p(Formula::top(), options);
  return p.term(e);
}

}  // namespace twpa::presburger
