#include "twpa/cli.hpp"

#include "twpa/constructions.hpp"
#include "twpa/crossing.hpp"
#include "twpa/decide.hpp"
#include "twpa/error.hpp"
#include "twpa/format.hpp"
#include "twpa/parikh.hpp"
#include "twpa/presburger/linear.hpp"
#include "twpa/presburger/qe.hpp"
#include "twpa/presburger/solver.hpp"
#include "twpa/presburger/syntax.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace twpa::cli {

namespace {

using json = nlohmann::json;
using presburger::Formula;

class UsageError : public Error {
 public:
  using Error::Error;
};

class OracleMismatch : public Error {
 public:
  using Error::Error;
};

struct Options {
  bool json = false;
  std::optional<std::size_t> oracle;
  std::size_t steps = 2000;
  std::optional<std::size_t> k;
  bool witness = false;
  bool pad = false;
  std::string output;
};

struct Report {
  std::string command;
  std::string verdict;
  std::optional<std::string> witness;
  std::optional<std::string> value;
  std::vector<std::pair<std::string, std::string>> fields;
  std::optional<std::string> body;  // automaton or formula text
  std::vector<std::string> words;
  json timings = json::object();
  int code = kHolds;
};

template <typename F>
auto timed(Report& r, const std::string& phase, F&& f) {
  auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    r.timings[phase] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  if constexpr (std::is_void_v<decltype(f())>) {
    f();
    finish();
  } else {
    auto result = f();
    finish();
    return result;
  }
}

Automaton load(Report& r, const std::string& path) {
  return timed(r, "parse", [&] {
    Automaton a = load_automaton(path);
    try {
      validate(a);
    } catch (const ValidationError& e) {
      throw ValidationError(e.condition(), path + ": " + e.what());
    }
    return a;
  });
}

std::string show_word(const Automaton& a, const Word& w) { return word_to_string(a, w); }

std::string show_run(const Automaton& a, const Run& run) {
  std::string s;
  for (std::size_t i = 0; i < run.configurations.size(); ++i) {
    const Configuration& c = run.configurations[i];
    if (i) s += ' ';
    s += a.state(c.state).name + "@" + std::to_string(c.position);
  }
  return s;
}

void add_witness(Report& r, const Automaton& a, const Witness& w, bool with_run) {
  r.witness = show_word(a, w.word);
  r.value = to_string(w.value);
  if (with_run) {
    r.fields.emplace_back("RUN", show_run(a, w.run));
    std::string trace;
    for (TransitionId t : w.run.trace) trace += (trace.empty() ? "" : " ") + std::to_string(t);
    r.fields.emplace_back("TRACE", trace);
  }
}

std::size_t visit_bound(const Automaton& a, const Options& o) {
  if (o.k) {
    if (*o.k < 1) throw UsageError("--k must be at least 1");
    return *o.k;
  }
  if (!is_deterministic(a)) throw UsageError("--k is required for nondeterministic automata");
  return default_visit_bound(a);
}

std::set<Word> sample(const Automaton& a, std::size_t len, const Options& o) {
  return language_sample(a, len, o.steps);
}

std::set<Word> universe(const Automaton& a, std::size_t len) {
  auto all = all_words(a.num_letters(), len);
  return {all.begin(), all.end()};
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw OracleMismatch("oracle disagreement: " + what);
}

void oracle_passed(Report& r, std::size_t len) { r.fields.emplace_back("ORACLE", "agrees up to length " + std::to_string(len)); }

void emit_automaton(Report& r, const Automaton& a, const Options& o, const std::string& header = {}) {
  std::string text = header + print_automaton(a);
  if (o.output.empty()) {
    r.body = std::move(text);
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw Error("cannot write " + o.output);
  f << text;
  r.fields.emplace_back("OUTPUT", o.output);
}

void emit_text(Report& r, const std::string& text, const Options& o) {
  if (o.output.empty()) {
    r.body = text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw Error("cannot write " + o.output);
  f << text << '\n';
  r.fields.emplace_back("OUTPUT", o.output);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// --- commands ---------------------------------------------------------------

void cmd_validate(Report& r, const std::string& path) {
  Automaton a = timed(r, "parse", [&] { return load_automaton(path); });
  try {
    validate(a);
  } catch (const ValidationError& e) {
    r.verdict = "invalid";
    r.code = kFails;
    r.fields.emplace_back("REASON", std::string(condition_name(e.condition())) + ": " + e.what());
    return;
  }
  r.verdict = "valid";
  r.fields.emplace_back("STATES", std::to_string(a.num_states()));
  r.fields.emplace_back("DIMENSION", std::to_string(a.dimension()));
  r.fields.emplace_back("DETERMINISTIC", yes_no(is_deterministic(a)));
  r.fields.emplace_back("ONE-WAY", yes_no(is_one_way(a)));
  r.fields.emplace_back("CLASS", presburger::to_string(presburger::classify(a.constraint())));
}

void cmd_member(Report& r, const Options& o, const std::string& path, const std::string& text) {
  Automaton a = load(r, path);
  Word w = parse_word(a, text);
  bool in = timed(r, "decide", [&] { return membership(a, w); });
  r.verdict = in ? "member" : "nonmember";
  r.code = in ? kHolds : kFails;
  if (o.oracle) {
    Verdict v = accepts_oracle(a, w, o.steps);
    if (v == Verdict::kBoundExhausted) {
      r.fields.emplace_back("ORACLE", "inconclusive");
    } else {
      expect((v == Verdict::kAccepted) == in, "accepts_oracle says " + std::string(to_string(v)));
      r.fields.emplace_back("ORACLE", "agrees");
    }
  }
}

void cmd_empty(Report& r, const Options& o, const std::string& path) {
  Automaton a = load(r, path);
  std::size_t k = visit_bound(a, o);
  EmptinessVerdict v = timed(r, "decide", [&] { return is_empty(a, k); });
  r.verdict = v.empty ? "empty" : "nonempty";
  r.code = v.empty ? kFails : kHolds;
  if (v.witness) add_witness(r, a, *v.witness, o.witness);
  if (o.oracle) {
    auto s = sample(a, *o.oracle, o);
    if (v.empty) expect(s.empty(), "a word of length <= " + std::to_string(*o.oracle) + " is accepted");
    if (v.witness && v.witness->word.size() <= *o.oracle)
      expect(s.count(v.witness->word) == 1, "the witness is not accepted by simulation");
    oracle_passed(r, *o.oracle);
  }
}

// Word in L(a1) \ L(a2), through the same product includes() decides.
std::optional<Witness> counterexample(const Automaton& a1, const Automaton& a2) {
  Automaton product = intersect(a1, complement(a2));
  EmptinessVerdict v = is_empty(product, default_visit_bound(product));
  if (v.empty) return std::nullopt;
  if (!v.witness) return Witness{};
  Witness w = *v.witness;
  w.run = {};
  return w;
}

void report_counterexample(Report& r, const Automaton& a, const std::optional<Witness>& w) {
  if (w) r.witness = show_word(a, w->word);
}

void cmd_universal(Report& r, const Options& o, const std::string& path) {
  Automaton a = load(r, path);
  bool universal = timed(r, "decide", [&] { return is_universal(a); });
  r.verdict = universal ? "universal" : "not-universal";
  r.code = universal ? kHolds : kFails;
  std::optional<Word> missing;
  if (!universal && o.witness) {
    Automaton c = complement(a);
    auto v = is_empty(c, default_visit_bound(c));
    if (v.witness) {
      missing = v.witness->word;
      r.witness = show_word(a, *missing);
    }
  }
  if (o.oracle) {
    auto s = sample(a, *o.oracle, o);
    if (universal) expect(s == universe(a, *o.oracle), "some short word is rejected");
    if (missing && missing->size() <= *o.oracle) expect(s.count(*missing) == 0, "the counterexample is accepted");
    oracle_passed(r, *o.oracle);
  }
}

void cmd_include(Report& r, const Options& o, const std::string& p1, const std::string& p2) {
  Automaton a1 = load(r, p1);
  Automaton a2 = load(r, p2);
  bool included = timed(r, "decide", [&] { return includes(a1, a2); });
  r.verdict = included ? "included" : "not-included";
  r.code = included ? kHolds : kFails;
  std::optional<Witness> w;
  if (!included && o.witness) {
    w = counterexample(a1, a2);
    report_counterexample(r, a1, w);
  }
  if (o.oracle) {
    auto s1 = sample(a1, *o.oracle, o), s2 = sample(a2, *o.oracle, o);
    if (included) expect(std::includes(s2.begin(), s2.end(), s1.begin(), s1.end()), "a short word separates the languages");
    if (w && w->word.size() <= *o.oracle)
      expect(s1.count(w->word) == 1 && s2.count(w->word) == 0, "the counterexample does not separate the languages");
    oracle_passed(r, *o.oracle);
  }
}

void cmd_equiv(Report& r, const Options& o, const std::string& p1, const std::string& p2) {
  Automaton a1 = load(r, p1);
  Automaton a2 = load(r, p2);
  bool same = timed(r, "decide", [&] { return equivalent(a1, a2); });
  r.verdict = same ? "equivalent" : "inequivalent";
  r.code = same ? kHolds : kFails;
  if (!same && o.witness) {
    auto w = counterexample(a1, a2);
    if (!w) w = counterexample(a2, a1);
    report_counterexample(r, a1, w);
  }
  if (o.oracle) {
    if (same) expect(sample(a1, *o.oracle, o) == sample(a2, *o.oracle, o), "a short word separates the languages");
    oracle_passed(r, *o.oracle);
  }
}

void cmd_convert(Report& r, const Options& o, const std::string& path) {
  Automaton a = load(r, path);
  std::size_t k = visit_bound(a, o);
  Conversion c = timed(r, "convert", [&] { return o.pad ? to_one_way_emptiness(a, k) : to_one_way(a, k); });
  r.fields.emplace_back("SECTIONS", std::to_string(c.sections.size()));
  emit_automaton(r, c.automaton, o);
  if (o.oracle) {
    auto s = sample(a, *o.oracle, o);
    auto t = sample(c.automaton, *o.oracle, o);
    if (o.pad) {
      for (const Word& w : t) expect(s.count(erase_pad(c, w)) == 1, "a padded word does not erase to an accepted word");
    } else {
      expect(s == t, "sampled languages differ");
    }
    oracle_passed(r, *o.oracle);
  }
}

void cmd_closure(Report& r, const Options& o, const std::string& op, const std::vector<std::string>& paths) {
  std::vector<Automaton> in;
  for (const auto& p : paths) in.push_back(load(r, p));
  Automaton out = timed(r, "construct", [&] {
    if (op == "complement") return complement(in[0]);
    if (op == "union") return unite(in[0], in[1]);
    return intersect(in[0], in[1]);
  });
  r.fields.emplace_back("CLASS", presburger::to_string(presburger::classify(out.constraint())));
  emit_automaton(r, out, o);
  if (o.oracle) {
    std::size_t len = *o.oracle;
    auto got = sample(out, len, o);
    std::set<Word> want;
    auto s1 = sample(in[0], len, o);
    if (op == "complement") {
      for (const Word& w : universe(in[0], len))
        if (!s1.count(w)) want.insert(w);
    } else {
      auto s2 = sample(in[1], len, o);
      for (const Word& w : universe(in[0], len)) {
        bool m1 = s1.count(w) > 0, m2 = s2.count(w) > 0;
        if (op == "union" ? (m1 || m2) : (m1 && m2)) want.insert(w);
      }
    }
    expect(got == want, "sampled language of the " + op + " differs from the set operation");
    oracle_passed(r, len);
  }
}

void cmd_parikh(Report& r, const Options& o, const std::string& path) {
  Automaton a = load(r, path);
  std::vector<presburger::VarId> tau;
  std::string vars;
  for (std::size_t i = 0; i < a.num_letters(); ++i) {
    tau.push_back(presburger::named_var("n" + std::to_string(i + 1)));
    vars += (i ? " " : "") + std::string("n") + std::to_string(i + 1) + "=" + a.alphabet()[i];
  }
  Formula f = timed(r, "construct", [&] { return parikh_image_formula(a, tau); });
  r.fields.emplace_back("VARS", vars);
  emit_text(r, presburger::to_string(f), o);
}

void cmd_lengthformula(Report& r, const Options& o, const std::string& path) {
  Automaton a = load(r, path);
  auto ell = presburger::named_var("l");
  Formula f = timed(r, "construct", [&] {
    if (is_one_way(a)) return length_formula(a, ell);
    Formula g = emptiness_formula(a, visit_bound(a, o));
    return presburger::rename(g, {{presburger::dim_var(1), ell}});
  });
  r.fields.emplace_back("CLASS", presburger::to_string(presburger::classify(f)));
  emit_text(r, presburger::to_string(f), o);
}

void cmd_qe(Report& r, const Options& o, const std::string& text) {
  Formula f = timed(r, "parse", [&] { return presburger::parse_formula(text); });
  Formula g = timed(r, "eliminate", [&] { return presburger::simplify(presburger::eliminate_all(f)); });
  if (presburger::free_vars(g).empty()) {
    bool value = presburger::eval_ground(g, {});
    r.verdict = value ? "true" : "false";
    r.code = value ? kHolds : kFails;
  }
  emit_text(r, presburger::to_string(g), o);
}

// Models of f with every free variable in [-bound, bound], at most four variables.
std::optional<presburger::Valuation> grid_model(const Formula& f, int bound) {
  auto vars = presburger::free_vars(f);
  if (vars.size() > 4) return std::nullopt;
  std::vector<presburger::VarId> vs(vars.begin(), vars.end());
  presburger::Valuation v;
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == vs.size()) return presburger::holds(f, v);
    for (int x = -bound; x <= bound; ++x) {
      v[vs[i]] = x;
      if (go(i + 1)) return true;
    }
    return false;
  };
  if (go(0)) return v;
  return std::nullopt;
}

void cmd_sat(Report& r, const Options& o, const std::string& text) {
  Formula f = timed(r, "parse", [&] { return presburger::parse_formula(text); });
  auto model = timed(r, "decide", [&] { return presburger::find_model(f); });
  r.verdict = model ? "sat" : "unsat";
  r.code = model ? kHolds : kFails;
  if (model) {
    std::vector<std::pair<std::string, std::string>> named;
    for (const auto& [v, x] : *model) named.emplace_back(presburger::var_name(v), x.get_str());
    std::sort(named.begin(), named.end());
    std::string s;
    for (const auto& [n, x] : named) s += (s.empty() ? "" : " ") + n + "=" + x;
    r.fields.emplace_back("MODEL", s);
  }
  if (o.oracle) {
    if (model) expect(presburger::holds(f, *model), "the model does not satisfy the formula");
    if (!model && presburger::free_vars(f).size() <= 4)
      expect(!grid_model(f, static_cast<int>(*o.oracle)), "grid search found a model");
    oracle_passed(r, *o.oracle);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void cmd_gen(Report& r, const Options& o, const std::string& family, const std::vector<std::string>& args) {
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw UsageError("gen " + family + " takes " + std::to_string(n) + " argument(s)");
  };
  if (family == "mismatch") {
    need(1);
    std::size_t n = 0;
    try {
      n = std::stoul(args[0]);
    } catch (const std::exception&) {
      throw UsageError("gen mismatch: '" + args[0] + "' is not a natural number");
    }
    emit_automaton(r, build_mismatch(n), o);
  } else if (family == "mult") {
    need(0);
    emit_automaton(r, build_multiplication(), o);
  } else if (family == "sweep") {
    need(0);
    emit_automaton(r, build_sweep(), o);
  } else if (family == "diophantine") {
    need(1);
    std::vector<Equation> eqs;
    try {
      eqs = parse_equations(read_file(args[0]));
    } catch (const ParseError& e) {
      throw Error(args[0] + ":" + e.what());
    }
    Encoding enc = timed(r, "construct", [&] { return encode_system(eqs); });
    std::string header;
    for (std::size_t i = 0; i < enc.dimension_names.size(); ++i)
      header += "// x" + std::to_string(i + 1) + ": " + enc.dimension_names[i] + "\n";
    emit_automaton(r, enc.automaton, o, header);
  } else {
    throw UsageError("unknown family '" + family + "' (mismatch, mult, sweep, diophantine)");
  }
}

void cmd_sample(Report& r, const Options& o, const std::string& path, std::size_t len) {
  Automaton a = load(r, path);
  auto s = timed(r, "sample", [&] { return sample(a, len, o); });
  for (const Word& w : s) r.words.push_back(w.empty() ? "eps" : show_word(a, w));
  std::sort(r.words.begin(), r.words.end());
  r.fields.emplace_back("COUNT", std::to_string(s.size()));
}

// --- output -----------------------------------------------------------------

void print(const Report& r, const Options& o, std::ostream& out) {
  if (o.json) {
    json j;
    j["command"] = r.command;
    j["verdict"] = r.verdict.empty() ? json(nullptr) : json(r.verdict);
    if (r.witness) j["witness"] = *r.witness;
    if (r.value) j["value"] = *r.value;
    for (const auto& [k, v] : r.fields) {
      std::string key = k;
      std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return c == '-' ? '_' : std::tolower(c); });
      j[key] = v;
    }
    if (r.body) j["output"] = *r.body;
    if (!r.words.empty() || r.command == "sample") j["words"] = r.words;
    j["timings"] = r.timings;
    out << j.dump() << '\n';
    return;
  }
  auto line = [&](const std::string& key, const std::string& value) {
    out << key << ':' << (value.empty() ? "" : " ") << value << '\n';
  };
  if (!r.verdict.empty()) line("VERDICT", r.verdict);
  if (r.witness) line("WITNESS", *r.witness);
  if (r.value) line("VALUE", *r.value);
  for (const auto& [k, v] : r.fields) line(k, v);
  for (const auto& w : r.words) out << w << '\n';
  if (r.body) {
    out << *r.body;
    if (!r.body->empty() && r.body->back() != '\n') out << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-way Parikh automata toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Machine-readable verdict records");
  app.add_option("--oracle-check", o.oracle, "Re-check the verdict by brute force up to this word length");
  app.add_option("--steps", o.steps, "Step bound of the brute-force simulation")->capture_default_str();

  std::string file, file2, word, formula, family;
  std::vector<std::string> rest;
  std::size_t len = 0;
  auto with_k = [&](CLI::App* c) { c->add_option("--k", o.k, "Visit bound (defaults to |Q| for deterministic input)"); };
  auto with_output = [&](CLI::App* c) { c->add_option("-o,--output", o.output, "Write the result to a file"); };

  auto* validate_cmd = app.add_subcommand("validate", "Check the well-formedness conditions");
  validate_cmd->add_option("file", file)->required();
  auto* member = app.add_subcommand("member", "Word membership");
  member->add_option("file", file)->required();
  member->add_option("word", word)->required();
  auto* empty = app.add_subcommand("empty", "Emptiness of a bounded-visit automaton");
  empty->add_option("file", file)->required();
  with_k(empty);
  empty->add_flag("--witness", o.witness, "Also print the run of the witness");
  auto* universal = app.add_subcommand("universal", "Universality of a deterministic automaton");
  universal->add_option("file", file)->required();
  universal->add_flag("--witness", o.witness, "Print a rejected word");
  auto* include = app.add_subcommand("include", "Language inclusion L(file1) <= L(file2)");
  include->add_option("file1", file)->required();
  include->add_option("file2", file2)->required();
  include->add_flag("--witness", o.witness, "Print a word separating the languages");
  auto* equiv = app.add_subcommand("equiv", "Language equivalence");
  equiv->add_option("file1", file)->required();
  equiv->add_option("file2", file2)->required();
  equiv->add_flag("--witness", o.witness, "Print a word separating the languages");
  auto* convert = app.add_subcommand("convert", "Crossing-section conversion to a one-way automaton");
  convert->add_option("file", file)->required();
  with_k(convert);
  convert->add_flag("--pad", o.pad, "Emptiness-preserving conversion with a padding letter");
  with_output(convert);
  auto* complement_cmd = app.add_subcommand("complement", "Complement of a deterministic automaton");
  complement_cmd->add_option("file", file)->required();
  with_output(complement_cmd);
  auto* union_cmd = app.add_subcommand("union", "Union of deterministic automata");
  union_cmd->add_option("file1", file)->required();
  union_cmd->add_option("file2", file2)->required();
  with_output(union_cmd);
  auto* intersect_cmd = app.add_subcommand("intersect", "Intersection of deterministic automata");
  intersect_cmd->add_option("file1", file)->required();
  intersect_cmd->add_option("file2", file2)->required();
  with_output(intersect_cmd);
  auto* parikh = app.add_subcommand("parikh", "Parikh image formula of a one-way automaton");
  parikh->add_option("file", file)->required();
  with_output(parikh);
  auto* lengthformula = app.add_subcommand("lengthformula", "Formula phi(l) of the emptiness pipeline");
  lengthformula->add_option("file", file)->required();
  with_k(lengthformula);
  with_output(lengthformula);
  auto* qe = app.add_subcommand("qe", "Quantifier elimination");
  qe->add_option("formula", formula)->required();
  with_output(qe);
  auto* sat = app.add_subcommand("sat", "Satisfiability with a model");
  sat->add_option("formula", formula)->required();
  auto* gen = app.add_subcommand("gen", "Generate an automaton: mismatch <n> | mult | sweep | diophantine <file>");
  gen->add_option("family", family)->required();
  gen->add_option("args", rest);
  with_output(gen);
  auto* sample_cmd = app.add_subcommand("sample", "Accepted words up to a length, by simulation");
  sample_cmd->add_option("file", file)->required();
  sample_cmd->add_option("length", len)->required();

  std::vector<std::string> storage{"twpa"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kHolds : kUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Report r;
  r.command = cmd->get_name();
  try {
    const std::string& name = r.command;
    if (name == "validate") cmd_validate(r, file);
    else if (name == "member") cmd_member(r, o, file, word);
    else if (name == "empty") cmd_empty(r, o, file);
    else if (name == "universal") cmd_universal(r, o, file);
    else if (name == "include") cmd_include(r, o, file, file2);
    else if (name == "equiv") cmd_equiv(r, o, file, file2);
    else if (name == "convert") cmd_convert(r, o, file);
    else if (name == "complement") cmd_closure(r, o, name, {file});
    else if (name == "union" || name == "intersect") cmd_closure(r, o, name, {file, file2});
    else if (name == "parikh") cmd_parikh(r, o, file);
    else if (name == "lengthformula") cmd_lengthformula(r, o, file);
    else if (name == "qe") cmd_qe(r, o, formula);
    else if (name == "sat") cmd_sat(r, o, formula);
    else if (name == "gen") cmd_gen(r, o, family, rest);
    else if (name == "sample") cmd_sample(r, o, file, len);
  } catch (const OracleMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    err << "error: " << condition_name(e.condition()) << ": " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  print(r, o, out);
  return r.code;
}

}  // namespace twpa::cli
