#include <doctest.h>

#include "corpus.hpp"
#include "twpa/cli.hpp"
#include "twpa/constructions.hpp"
#include "twpa/decide.hpp"
#include "twpa/format.hpp"

#include <json.hpp>

#include "twpa/presburger/syntax.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace twpa;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;

  bool has_line(const std::string& line) const {
    std::istringstream in(out);
    std::string l;
    while (std::getline(in, l))
      if (l == line) return true;
    return false;
  }
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = twpa::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("twpa-cli-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string save(const std::string& name, const Automaton& a) {
    auto p = (dir_ / name).string();
    save_automaton(a, p);
    return p;
  }
  std::string write(const std::string& name, const std::string& text) {
    auto p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("cli emptiness of the sweeper") {
  Scratch s;
  auto sweep = s.save("sweep.2pa", build_sweep());
  auto r = invoke({"empty", sweep, "--k", "3"});
  CHECK(r.code == 0);
  CHECK(r.has_line("VERDICT: nonempty"));
  CHECK(r.has_line("WITNESS:"));
  CHECK(r.has_line("VALUE: (0,0)"));

  auto j = nlohmann::json::parse(invoke({"empty", sweep, "--json", "--witness"}).out);
  CHECK(j["command"] == "empty");
  CHECK(j["verdict"] == "nonempty");
  CHECK(j["witness"] == "");
  CHECK(j["value"] == "(0,0)");
  CHECK(j.contains("timings"));
  CHECK(j.contains("run"));
}

TEST_CASE("cli membership and comparisons") {
  Scratch s;
  auto mult = s.save("mult.2pa", build_multiplication());
  CHECK(invoke({"member", mult, "aa#aaa#aaaaaa"}).code == 0);
  auto no = invoke({"member", mult, "aa#aaa#aaaaa", "--oracle-check", "0"});
  CHECK(no.code == 1);
  CHECK(no.has_line("VERDICT: nonmember"));
  CHECK((no.has_line("ORACLE: agrees") || no.has_line("ORACLE: inconclusive")));

  auto sweep = s.save("sweep.2pa", build_sweep());
  CHECK(invoke({"equiv", sweep, sweep}).code == 0);
  Automaton strong = build_sweep();
  strong.set_constraint(presburger::parse_formula("x1 = x2 /\\ 1 <= x1"));
  auto strong_path = s.save("strong.2pa", strong);
  CHECK(invoke({"include", strong_path, sweep, "--oracle-check", "4"}).code == 0);
  auto back = invoke({"include", sweep, strong_path, "--witness"});
  CHECK(back.code == 1);
  CHECK(back.has_line("WITNESS:"));
  CHECK(invoke({"universal", sweep}).code == 1);
}

TEST_CASE("cli closures and conversions pass their oracle checks") {
  Scratch s;
  auto sweep = s.save("sweep.2pa", build_sweep());
  auto mm = s.save("mm.2pa", build_mismatch(1));
  auto out = s.write("c.2pa", "");
  auto c = invoke({"complement", sweep, "-o", out, "--oracle-check", "5"});
  CHECK(c.code == 0);
  CHECK(c.has_line("CLASS: Sigma_0"));
  CHECK(load_automaton(out).num_states() > 0);
  CHECK(invoke({"union", sweep, out, "--oracle-check", "4"}).code == 0);
  CHECK(invoke({"intersect", sweep, out, "--oracle-check", "4"}).code == 0);
  CHECK(invoke({"convert", sweep, "--oracle-check", "5"}).code == 0);
  CHECK(invoke({"convert", mm, "--pad", "--oracle-check", "4"}).code == 0);
  CHECK(invoke({"universal", s.save("u.2pa", unite(build_sweep(), complement(build_sweep()))), "--oracle-check", "4"}).code == 0);
}

TEST_CASE("cli formulas") {
  auto f = invoke({"qe", "exists x. forall y. x <= y"});
  CHECK(f.code == 1);
  CHECK(f.has_line("VERDICT: false"));
  CHECK(invoke({"qe", "forall y. exists x. x <= y"}).code == 0);
  auto sat = invoke({"sat", "x + y = 3 /\\ x < y", "--oracle-check", "4"});
  CHECK(sat.code == 0);
  CHECK(sat.has_line("VERDICT: sat"));
  CHECK(invoke({"sat", "2*(x) = 1"}).code == 1);

  Scratch s;
  auto sweep = s.save("sweep.2pa", build_sweep());
  auto phi = invoke({"lengthformula", sweep});
  CHECK(phi.code == 0);
  CHECK(phi.has_line("CLASS: Sigma_1"));
  auto parikh = invoke({"parikh", sweep});
  CHECK(parikh.code == 2);  // two-way input
}

TEST_CASE("cli generators and samples") {
  Scratch s;
  auto g = invoke({"gen", "mismatch", "1"});
  REQUIRE(g.code == 0);
  Automaton a = parse_automaton(g.out);
  CHECK(print_automaton(a) == print_automaton(build_mismatch(1)));
  auto eq = s.write("eq.txt", "x*x = 1+1+1+1\n");
  auto d = invoke({"gen", "diophantine", eq});
  CHECK(d.code == 0);
  CHECK(d.out.find("// x1: ") == 0);

  auto sample = invoke({"sample", s.save("sweep.2pa", build_sweep()), "2"});
  CHECK(sample.code == 0);
  CHECK(sample.out == "COUNT: 3\nab\nba\neps\n");
}

TEST_CASE("cli usage and input errors exit with 2") {
  Scratch s;
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"empty"}).code == 2);
  auto mult = s.save("mult.2pa", build_multiplication());
  auto nok = invoke({"empty", mult});
  CHECK(nok.code == 2);
  CHECK(nok.err.find("--k") != std::string::npos);

  auto bad = s.write("bad.2pa", "alphabet a\ndim 0\nstate q R initial\nbogus line\n");
  auto r = invoke({"empty", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.2pa:4") != std::string::npos);

  auto invalid = s.write("invalid.2pa", "alphabet a\ndim 0\nstate q R initial halting accepting\nstate p R\ntrans q a p\n");
  CHECK(invoke({"empty", invalid}).code == 2);
  auto v = invoke({"validate", invalid});
  CHECK(v.code == 1);
  CHECK(v.has_line("VERDICT: invalid"));

  auto eq = s.write("eq.txt", "x*x = \n");
  auto e = invoke({"gen", "diophantine", eq});
  CHECK(e.code == 2);
  CHECK(e.err.find("eq.txt:1") != std::string::npos);
  CHECK(invoke({"member", s.save("sweep.2pa", build_sweep()), "abz"}).code == 2);
  CHECK(invoke({"complement", mult}).code == 2);
}

TEST_CASE("cli verdicts equal library results on the corpus") {
  Scratch s;
  auto corpus = twpa::testing::sweeper_corpus(41, 20);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& sw = corpus[i];
    auto path = s.save("p" + std::to_string(i) + ".2pa", sw.automaton);
    auto r = invoke({"empty", path, "--k", std::to_string(sw.k), "--oracle-check", "4"});
    bool empty = is_empty(sw.automaton, sw.k).empty;
    CHECK(r.code == (empty ? 1 : 0));
    for (const Word& w : all_words(sw.automaton.num_letters(), 3)) {
      auto m = invoke({"member", path, w.empty() ? "eps" : word_to_string(sw.automaton, w)});
      CHECK(m.code == (membership(sw.automaton, w) ? 0 : 1));
    }
  }
}
