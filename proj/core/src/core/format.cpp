#include "twpa/format.hpp"

#include "twpa/error.hpp"
#include "twpa/presburger/syntax.hpp"

#include <fstream>
#include <sstream>

namespace twpa {

namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Vector parse_weight(std::string_view text, std::size_t dim, std::size_t line, const std::string& source) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) return zero_vector(dim);
  if (s.front() != '(' || s.back() != ')') throw ParseError("weight must look like (a,b,...)", line, source);
  s = s.substr(1, s.size() - 2);
  Vector v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    Int x;
    if (item.empty() || x.set_str(item, 10) != 0) throw ParseError("bad weight entry '" + item + "'", line, source);
    v.push_back(x);
  }
  if (v.size() != dim)
    throw ParseError("weight has " + std::to_string(v.size()) + " entries, dimension is " + std::to_string(dim), line,
                     source);
  return v;
}

}  // namespace

Automaton parse_automaton(std::string_view text, const std::string& source) {
  std::vector<std::string> alphabet;
  std::size_t dim = 0;
  bool have_alphabet = false, have_dim = false, started = false;
  Automaton a;
  std::optional<std::string> constraint;
  std::size_t constraint_line = 0;

  auto ensure_started = [&](std::size_t line) {
    if (started) return;
    if (!have_alphabet) throw ParseError("'alphabet' must come before states and transitions", line, source);
    a = Automaton(alphabet, dim);
    started = true;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto c = line.find("//"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;

    if (line.rfind("constraint:", 0) == 0) {
      if (constraint) throw ParseError("duplicate constraint", line_no, source);
      constraint = std::string(trim(line.substr(11)));
      constraint_line = line_no;
      continue;
    }
    auto words = split_words(line);
    const std::string& kw = words[0];
    if (kw == "alphabet") {
      if (have_alphabet || started) throw ParseError("duplicate or late 'alphabet'", line_no, source);
      alphabet.assign(words.begin() + 1, words.end());
      have_alphabet = true;
      try {
        Automaton probe(alphabet, 0);
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no, source);
      }
    } else if (kw == "dim") {
      if (have_dim || started || words.size() != 2) throw ParseError("expected 'dim <n>' once, before states", line_no, source);
      try {
        dim = std::stoul(words[1]);
      } catch (const std::exception&) {
        throw ParseError("bad dimension '" + words[1] + "'", line_no, source);
      }
      have_dim = true;
    } else if (kw == "state") {
      ensure_started(line_no);
      if (words.size() < 3) throw ParseError("expected 'state <name> R|L [initial] [halting] [accepting]'", line_no, source);
      Direction dir;
      if (words[2] == "R") dir = Direction::kRight;
      else if (words[2] == "L") dir = Direction::kLeft;
      else throw ParseError("state direction must be R or L", line_no, source);
      bool initial = false, halting = false, accepting = false;
      for (std::size_t i = 3; i < words.size(); ++i) {
        if (words[i] == "initial") initial = true;
        else if (words[i] == "halting") halting = true;
        else if (words[i] == "accepting") accepting = true;
        else throw ParseError("unknown state flag '" + words[i] + "'", line_no, source);
      }
      if (a.find_state(words[1])) throw ParseError("duplicate state '" + words[1] + "'", line_no, source);
      a.add_state(words[1], dir, initial, halting, accepting);
    } else if (kw == "trans") {
      ensure_started(line_no);
      if (words.size() < 4) throw ParseError("expected 'trans <from> <symbol> <to> [(weight)]'", line_no, source);
      auto from = a.find_state(words[1]);
      auto to = a.find_state(words[3]);
      if (!from) throw ParseError("unknown state '" + words[1] + "'", line_no, source);
      if (!to) throw ParseError("unknown state '" + words[3] + "'", line_no, source);
      auto sym = a.find_symbol(words[2]);
      if (!sym) throw ParseError("unknown symbol '" + words[2] + "'", line_no, source);
      std::string rest;
      for (std::size_t i = 4; i < words.size(); ++i) rest += words[i];
      a.add_transition(*from, *sym, *to, parse_weight(rest, dim, line_no, source));
    } else {
      throw ParseError("unknown directive '" + kw + "'", line_no, source);
    }
  }
  ensure_started(line_no);
  if (constraint) {
    try {
      a.set_constraint(presburger::parse_formula(*constraint));
    } catch (const ParseError& e) {
      throw ParseError(std::string("constraint: ") + e.what(), constraint_line, source);
    }
  }
  return a;
}

Automaton load_automaton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_automaton(ss.str(), path);
}

std::string print_automaton(const Automaton& a) {
  std::ostringstream out;
  out << "alphabet";
  for (const auto& s : a.alphabet()) out << ' ' << s;
  out << "\ndim " << a.dimension() << '\n';
  for (const auto& s : a.states()) {
    out << "state " << s.name << ' ' << (s.direction == Direction::kRight ? 'R' : 'L');
    if (s.initial) out << " initial";
    if (s.halting) out << " halting";
    if (s.accepting) out << " accepting";
    out << '\n';
  }
  for (const auto& t : a.transitions()) {
    out << "trans " << a.state(t.from).name << ' ' << a.symbol_name(t.symbol) << ' ' << a.state(t.to).name;
    if (a.dimension() > 0) out << ' ' << to_string(t.weight);
    out << '\n';
  }
  out << "constraint: " << presburger::to_string(a.constraint()) << '\n';
  return out.str();
}

void save_automaton(const Automaton& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << print_automaton(a);
}

}  // namespace twpa
