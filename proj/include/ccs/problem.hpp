#pragma once

// Problems: proper axioms with arity types and an optional goal atom.
//
// Native format, one item per line ('#' comments):
//   implication i             symbol used for detachment (default imp)
//   vars a b                  extra identifiers to read as variables
//   axiom 1:0 P(a)
//   axiom 2 P(f(x)) :- P(x)   Horn clause, curried; arity = body length
//   goal P(f(f(a))):0
//
// TPTP input is restricted to the CNF condensed-detachment pattern: unit
// clauses of one wrapper predicate, the clause
//   ~W(i(X,Y)) | ~W(X) | W(Y)
// and at most one negated ground unit goal.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccs/formula.hpp"
#include "ccs/mgt.hpp"
#include "ccs/tables.hpp"

namespace ccs {

class ProblemError : public std::runtime_error {
 public:
  enum class Kind {
    Syntax,
    Unsupported,
    NonHorn,
    MissingDetachment,
    NonAtomicGoal,
    MultipleGoals,
    NonGroundGoal,
    MixedWrappers,
    BadArity,
    NoAxioms,
  };
  ProblemError(Kind k, const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), kind_(k), line_(line) {}
  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

struct Problem {
  AxiomTable axioms;
  std::optional<Formula> goal;
  int goal_arity = 0;
  std::string implication = "imp";
  std::set<std::string> declared_vars;
  std::string source;
  std::string format;                              // native, tptp or generated
  std::map<std::string, std::string> clause_names;  // axiom id -> TPTP clause name

  Theory theory(const Calculus& calc = default_calculus()) const { return Theory(implication, axioms, calc); }
  FormulaSyntax syntax() const { return {implication, declared_vars}; }
};

// Number of leading antecedents of `f`.
inline int implication_depth(const Formula& f, const std::string& imp) {
  int n = 0;
  for (const Formula* g = &f; is_implication(*g, imp); g = &g->args()[1]) ++n;
  return n;
}

// a1, ..., ak -> b as a1 => (a2 => ... => b), arity type k.
inline std::pair<Formula, int> curry_horn(const Formula& head, const std::vector<Formula>& body,
                                          const std::string& imp = "imp") {
  Formula f = head;
  for (auto it = body.rbegin(); it != body.rend(); ++it) f = implication(imp, *it, f);
  return {f, static_cast<int>(body.size())};
}

// Axioms P(a) and P(x) => P(f(x)) with goal P(f^n(a)).
inline Problem fn_problem(std::size_t n) {
  Problem p;
  Formula x = Formula::var("x");
  p.axioms.add({"1", Formula::fun("P", {Formula::fun("a")}), 0});
  p.axioms.add({"2", implication("imp", Formula::fun("P", {x}), Formula::fun("P", {Formula::fun("f", {x})})), 1});
  Formula t = Formula::fun("a");
  for (std::size_t i = 0; i < n; ++i) t = Formula::fun("f", {t});
  p.goal = Formula::fun("P", {t});
  p.goal_arity = 0;
  p.source = "fn:" + std::to_string(n);
  p.format = "generated";
  return p;
}

namespace detail {

// Splits "text:digits" at the last top-level colon.
inline std::pair<std::string_view, std::optional<int>> split_arity(std::string_view s) {
  s = trim(s);
  std::size_t c = s.rfind(':');
  if (c == std::string_view::npos || c + 1 >= s.size()) return {s, std::nullopt};
  std::string_view digits = trim(s.substr(c + 1));
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    return {s, std::nullopt};
  return {trim(s.substr(0, c)), std::stoi(std::string(digits))};
}

inline std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

inline Formula parse_problem_formula(std::string_view text, const FormulaSyntax& syn, std::size_t line) {
  try {
    return parse_formula(text, syn);
  } catch (const ParseError& e) {
    throw ProblemError(ProblemError::Kind::Syntax, e.what(), line);
  }
}

}  // namespace detail

inline Problem parse_native_problem(std::string_view text, std::string source = "<string>") {
  Problem p;
  p.source = std::move(source);
  p.format = "native";
  struct Pending {
    std::size_t line;
    std::string id;
    std::optional<int> arity;
    std::string body;
  };
  std::vector<Pending> axioms;
  std::optional<Pending> goal;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = detail::trim(detail::strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    std::size_t sp = line.find_first_of(" \t");
    std::string_view kw = line.substr(0, sp);
    std::string_view rest = sp == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(sp));
    if (kw == "implication") {
      if (rest.empty()) throw ProblemError(ProblemError::Kind::Syntax, "implication needs a symbol", line_no);
      p.implication = std::string(rest);
    } else if (kw == "vars") {
      std::size_t s = 0;
      while (s < rest.size()) {
        std::size_t e = rest.find_first_of(" \t", s);
        if (e == std::string_view::npos) e = rest.size();
        if (e > s) p.declared_vars.insert(std::string(rest.substr(s, e - s)));
        s = e + 1;
      }
    } else if (kw == "axiom") {
      std::size_t e = rest.find_first_of(" \t");
      if (e == std::string_view::npos) throw ProblemError(ProblemError::Kind::Syntax, "axiom needs a formula", line_no);
      auto [id, arity] = detail::split_arity(rest.substr(0, e));
      if (id.empty() || !std::all_of(id.begin(), id.end(), detail::ident_char))
        throw ProblemError(ProblemError::Kind::Syntax, "bad axiom id '" + std::string(id) + "'", line_no);
      axioms.push_back({line_no, std::string(id), arity, std::string(detail::trim(rest.substr(e)))});
    } else if (kw == "goal") {
      if (goal) throw ProblemError(ProblemError::Kind::MultipleGoals, "second goal", line_no);
      auto [f, arity] = detail::split_arity(rest);
      goal = Pending{line_no, "", arity, std::string(f)};
    } else {
      throw ProblemError(ProblemError::Kind::Syntax, "unknown directive '" + std::string(kw) + "'", line_no);
    }
  }
  FormulaSyntax syn = p.syntax();
  for (const auto& a : axioms) {
    Formula f;
    int arity = kUnknownArity;
    std::size_t neck = a.body.find(":-");
    if (neck != std::string::npos) {
      Formula head = detail::parse_problem_formula(std::string_view(a.body).substr(0, neck), syn, a.line);
      std::vector<Formula> body;
      for (auto part : detail::split_top_level(std::string_view(a.body).substr(neck + 2), ','))
        body.push_back(detail::parse_problem_formula(part, syn, a.line));
      std::tie(f, arity) = curry_horn(head, body, p.implication);
    } else {
      f = detail::parse_problem_formula(a.body, syn, a.line);
    }
    if (a.arity) {
      if (*a.arity > implication_depth(f, p.implication))
        throw ProblemError(ProblemError::Kind::BadArity,
                           "arity " + std::to_string(*a.arity) + " exceeds the antecedents of axiom " + a.id, a.line);
      arity = *a.arity;
    }
    try {
      p.axioms.add({a.id, f, arity});
    } catch (const std::invalid_argument& e) {
      throw ProblemError(ProblemError::Kind::Syntax, e.what(), a.line);
    }
  }
  if (goal) {
    p.goal = detail::parse_problem_formula(goal->body, syn, goal->line);
    p.goal_arity = goal->arity.value_or(0);
    if (p.goal_arity > implication_depth(*p.goal, p.implication))
      throw ProblemError(ProblemError::Kind::BadArity, "goal arity exceeds its antecedents", goal->line);
  }
  if (p.axioms.entries().empty()) throw ProblemError(ProblemError::Kind::NoAxioms, "problem has no axioms");
  return p;
}

namespace detail {

inline bool reads_as_variable(const std::string& id, const FormulaSyntax& syn) { return syn.is_variable_name(id); }

inline void print_native_formula(const Formula& f, const FormulaSyntax& syn, bool parens, std::string& out) {
  if (f.is_var()) {
    out += f.name();
    return;
  }
  if (is_implication(f, syn.implication)) {
    if (parens) out += '(';
    print_native_formula(f.args()[0], syn, true, out);
    out += " => ";
    print_native_formula(f.args()[1], syn, false, out);
    if (parens) out += ')';
    return;
  }
  out += f.name();
  if (f.arity() == 0) {
    if (reads_as_variable(f.name(), syn)) out += "()";
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (i) out += ',';
    print_native_formula(f.args()[i], syn, false, out);
  }
  out += ')';
}

}  // namespace detail

// Formula text that parse_native_problem reads back identically.
inline std::string print_native_formula(const Formula& f, const FormulaSyntax& syn) {
  std::string out;
  detail::print_native_formula(f, syn, false, out);
  return out;
}

inline std::string print_native_problem(const Problem& p) {
  FormulaSyntax syn = p.syntax();
  // Variables whose names would read as constants get declared.
  std::set<std::string> extra = p.declared_vars;
  auto scan = [&](const Formula& f) {
    for (const auto& v : variables_of(f))
      if (!syn.is_variable_name(v)) extra.insert(v);
  };
  for (const auto& a : p.axioms.entries()) scan(a.formula);
  if (p.goal) scan(*p.goal);
  syn.declared_vars = extra;
  std::string out;
  if (p.implication != "imp") out += "implication " + p.implication + "\n";
  if (!extra.empty()) {
    out += "vars";
    for (const auto& v : extra) out += " " + v;
    out += "\n";
  }
  for (const auto& a : p.axioms.entries()) {
    out += "axiom " + a.id;
    if (a.arity != kUnknownArity) out += ":" + std::to_string(a.arity);
    out += " " + print_native_formula(a.formula, syn) + "\n";
  }
  if (p.goal) out += "goal " + print_native_formula(*p.goal, syn) + ":" + std::to_string(p.goal_arity) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// TPTP

namespace detail {

class TptpLexer {
 public:
  enum class Tok { Word, Var, Quoted, Punct, End };
  struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
  };

  explicit TptpLexer(std::string_view s) : s_(s) {}

  Token next() {
    skip();
    if (pos_ >= s_.size()) return {Tok::End, "", line_};
    char c = s_[pos_];
    std::size_t start = pos_;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '$'))
        ++pos_;
      std::string w(s_.substr(start, pos_ - start));
      bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      return {var ? Tok::Var : Tok::Word, w, line_};
    }
    if (c == '\'' || c == '"') {
      ++pos_;
      std::string w;
      while (pos_ < s_.size() && s_[pos_] != c) {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        w += s_[pos_++];
      }
      if (pos_ >= s_.size()) throw ProblemError(ProblemError::Kind::Syntax, "unterminated quote", line_);
      ++pos_;
      return {Tok::Quoted, w, line_};
    }
    if (s_.substr(pos_, 2) == "!=") {
      pos_ += 2;
      return {Tok::Punct, "!=", line_};
    }
    ++pos_;
    return {Tok::Punct, std::string(1, c), line_};
  }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '*') {
        pos_ += 2;
        while (pos_ + 1 < s_.size() && !(s_[pos_] == '*' && s_[pos_ + 1] == '/')) {
          if (s_[pos_] == '\n') ++line_;
          ++pos_;
        }
        pos_ += 2;
      } else {
        break;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

struct TptpLiteral {
  bool positive;
  Formula atom;
};

struct TptpClause {
  std::string name;
  std::string role;
  std::vector<TptpLiteral> literals;
  std::size_t line;
};

class TptpParser {
 public:
  TptpParser(std::string_view text, std::filesystem::path dir) : lex_(text), dir_(std::move(dir)) { advance(); }

  void parse(std::vector<TptpClause>& out, int depth = 0) {
    while (tok_.kind != TptpLexer::Tok::End) {
      if (tok_.kind != TptpLexer::Tok::Word) fail("expected cnf(...) or include(...)");
      std::string kw = tok_.text;
      std::size_t line = tok_.line;
      advance();
      if (kw == "include") {
        expect("(");
        if (tok_.kind != TptpLexer::Tok::Quoted) fail("include needs a quoted file name");
        std::string file = tok_.text;
        advance();
        if (accept(",")) skip_balanced_list();
        expect(")");
        expect(".");
        include(file, out, depth, line);
        continue;
      }
      if (kw == "fof" || kw == "tff" || kw == "thf" || kw == "tcf")
        throw ProblemError(ProblemError::Kind::Unsupported, kw + " input is not supported; only CNF", line);
      if (kw != "cnf") fail("unknown TPTP statement '" + kw + "'");
      expect("(");
      TptpClause c;
      c.line = line;
      c.name = name();
      expect(",");
      c.role = name();
      expect(",");
      std::size_t parens = 0;
      while (accept("(")) ++parens;
      clause_literals(c);
      for (; parens > 0; --parens) expect(")");
      while (accept(",")) skip_annotation();
      expect(")");
      expect(".");
      out.push_back(std::move(c));
    }
  }

 private:
  void include(const std::string& file, std::vector<TptpClause>& out, int depth, std::size_t line) {
    if (depth > 8) throw ProblemError(ProblemError::Kind::Syntax, "includes nest too deeply", line);
    std::vector<std::filesystem::path> candidates{dir_ / file};
    if (const char* root = std::getenv("TPTP")) candidates.emplace_back(std::filesystem::path(root) / file);
    for (auto d = dir_; !d.empty() && d != d.parent_path(); d = d.parent_path())
      candidates.push_back(d / file);
    for (const auto& c : candidates) {
      if (!std::filesystem::exists(c)) continue;
      std::string text = read_file(c.string());
      TptpParser sub(text, c.parent_path());
      sub.parse(out, depth + 1);
      return;
    }
    throw ProblemError(ProblemError::Kind::Syntax, "cannot find included file " + file, line);
  }

  void clause_literals(TptpClause& c) {
    do {
      if (accept("(")) {
        clause_literals(c);
        expect(")");
        continue;
      }
      bool positive = !accept("~");
      if (tok_.kind == TptpLexer::Tok::Word && tok_.text == "$false") {
        advance();
        continue;
      }
      Formula a = term();
      if (tok_.kind == TptpLexer::Tok::Punct && (tok_.text == "=" || tok_.text == "!="))
        throw ProblemError(ProblemError::Kind::Unsupported, "equality literals are not supported", tok_.line);
      c.literals.push_back({positive, std::move(a)});
    } while (accept("|"));
  }

  Formula term() {
    if (tok_.kind == TptpLexer::Tok::Var) {
      std::string v = tok_.text;
      advance();
      return Formula::var(v);
    }
    if (tok_.kind != TptpLexer::Tok::Word && tok_.kind != TptpLexer::Tok::Quoted) fail("expected a term");
    std::string f = tok_.text;
    advance();
    std::vector<Formula> args;
    if (accept("(")) {
      do args.push_back(term());
      while (accept(","));
      expect(")");
    }
    return Formula::fun(f, std::move(args));
  }

  std::string name() {
    if (tok_.kind != TptpLexer::Tok::Word && tok_.kind != TptpLexer::Tok::Quoted && tok_.kind != TptpLexer::Tok::Var)
      fail("expected a name");
    std::string n = tok_.text;
    advance();
    return n;
  }

  void skip_annotation() {
    int depth = 0;
    while (tok_.kind != TptpLexer::Tok::End) {
      if (tok_.kind == TptpLexer::Tok::Punct) {
        if (tok_.text == "(" || tok_.text == "[") ++depth;
        if (tok_.text == ")" || tok_.text == "]") {
          if (depth == 0) return;
          --depth;
        }
        if (tok_.text == "," && depth == 0) return;
      }
      advance();
    }
  }
  void skip_balanced_list() { skip_annotation(); }

  void advance() { tok_ = lex_.next(); }
  bool accept(const char* p) {
    if (tok_.kind == TptpLexer::Tok::Punct && tok_.text == p) {
      advance();
      return true;
    }
    return false;
  }
  void expect(const char* p) {
    if (!accept(p)) fail(std::string("expected '") + p + "'");
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ProblemError(ProblemError::Kind::Syntax, what + (tok_.text.empty() ? "" : " near '" + tok_.text + "'"),
                       tok_.line);
  }

  TptpLexer lex_;
  std::filesystem::path dir_;
  TptpLexer::Token tok_{};
};

// Connective of `c` if it has the detachment shape ~W(i(X,Y)) | ~W(X) | W(Y).
inline std::optional<std::string> detachment_connective(const TptpClause& c, std::string& wrapper) {
  if (c.literals.size() != 3) return std::nullopt;
  const TptpLiteral* pos = nullptr;
  std::vector<const TptpLiteral*> neg;
  for (const auto& l : c.literals) {
    if (!l.positive) {
      neg.push_back(&l);
    } else if (!pos) {
      pos = &l;
    } else {
      return std::nullopt;
    }
  }
  if (!pos || neg.size() != 2) return std::nullopt;
  auto unary = [](const Formula& a) { return !a.is_var() && a.arity() == 1; };
  if (!unary(pos->atom) || !unary(neg[0]->atom) || !unary(neg[1]->atom)) return std::nullopt;
  const std::string& w = pos->atom.name();
  if (neg[0]->atom.name() != w || neg[1]->atom.name() != w) return std::nullopt;
  const Formula& y = pos->atom.args()[0];
  if (!y.is_var()) return std::nullopt;
  for (int k = 0; k < 2; ++k) {
    const Formula& imp = neg[k]->atom.args()[0];
    const Formula& x = neg[1 - k]->atom.args()[0];
    if (!x.is_var() || x == y || imp.is_var() || imp.arity() != 2) continue;
    if (imp.args()[0] == x && imp.args()[1] == y) {
      wrapper = w;
      return imp.name();
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline Problem parse_tptp_cd(std::string_view text, const std::string& source = "<string>",
                             std::filesystem::path dir = {}) {
  std::vector<detail::TptpClause> clauses;
  detail::TptpParser parser(text, std::move(dir));
  parser.parse(clauses);
  Problem p;
  p.source = source;
  p.format = "tptp";
  std::string wrapper;
  const detail::TptpClause* cd = nullptr;
  for (const auto& c : clauses) {
    if (auto conn = detail::detachment_connective(c, wrapper)) {
      cd = &c;
      p.implication = *conn;
      break;
    }
  }
  if (!cd) throw ProblemError(ProblemError::Kind::MissingDetachment, "no condensed-detachment clause found");
  auto strip = [&](const detail::TptpLiteral& l, const detail::TptpClause& c) -> Formula {
    if (l.atom.is_var() || l.atom.arity() != 1 || l.atom.name() != wrapper)
      throw ProblemError(ProblemError::Kind::MixedWrappers,
                         "clause " + c.name + " uses a literal other than " + wrapper + "(...)", c.line);
    return l.atom.args()[0];
  };
  std::size_t next_id = 1;
  std::vector<const detail::TptpClause*> goals;
  for (const auto& c : clauses) {
    if (&c == cd) continue;
    std::string w;
    if (detail::detachment_connective(c, w) == p.implication && w == wrapper) continue;  // repeated
    std::size_t npos = 0;
    for (const auto& l : c.literals) npos += l.positive;
    if (npos > 1) throw ProblemError(ProblemError::Kind::NonHorn, "clause " + c.name + " is not Horn", c.line);
    if (npos == 0) {
      goals.push_back(&c);
      continue;
    }
    Formula head;
    std::vector<Formula> body;
    for (const auto& l : c.literals) {
      if (l.positive) {
        head = strip(l, c);
      } else {
        body.push_back(strip(l, c));
      }
    }
    auto [f, arity] = curry_horn(head, body, p.implication);
    std::string id = std::to_string(next_id++);
    p.axioms.add({id, f, arity});
    p.clause_names.emplace(id, c.name);
  }
  if (goals.size() > 1) {
    throw ProblemError(ProblemError::Kind::MultipleGoals,
                       "more than one negated goal clause (" + goals[0]->name + ", " + goals[1]->name + ")",
                       goals[1]->line);
  }
  if (!goals.empty()) {
    const auto& g = *goals.front();
    if (g.literals.size() != 1)
      throw ProblemError(ProblemError::Kind::NonAtomicGoal, "goal clause " + g.name + " is not atomic", g.line);
    Formula atom = strip(g.literals.front(), g);
    if (!atom.is_ground())
      throw ProblemError(ProblemError::Kind::NonGroundGoal, "goal of " + g.name + " is not ground", g.line);
    p.goal = atom;
    p.goal_arity = 0;
  }
  if (p.axioms.entries().empty()) throw ProblemError(ProblemError::Kind::NoAxioms, "problem has no axioms");
  return p;
}

inline bool looks_like_tptp(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '%') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    break;
  }
  for (std::string_view kw : {"cnf(", "fof(", "include(", "tff(", "thf(", "/*"})
    if (text.substr(i, kw.size()) == kw) return true;
  return false;
}

// "fn:N" builds the f^n problem; files are read as TPTP when they have a .p
// or .ax extension or start like TPTP, otherwise as native format.
inline Problem load_problem(const std::string& where) {
  if (where.rfind("fn:", 0) == 0) {
    std::string n = where.substr(3);
    if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ProblemError(ProblemError::Kind::Syntax, "fn: needs a number, got '" + n + "'");
    return fn_problem(std::stoul(n));
  }
  std::string text = read_file(where);
  std::filesystem::path path(where);
  auto ext = path.extension().string();
  if (ext == ".p" || ext == ".ax" || looks_like_tptp(text)) return parse_tptp_cd(text, where, path.parent_path());
  return parse_native_problem(text, where);
}

}  // namespace ccs
