#pragma once

// Axiom, combinator and schema tables, plus the line-oriented config format:
//
//   # comment
//   combinator B = \x y z. x (y z) :: (p => q) => ((r => p) => (r => q))
//   combinator I' = \x y. y x :: p => ((p => q) => q) alt C I
//   r4(p:1,q:1):1 = B p q
//   r2(p:2,q:0):1 = \x. p q x
//   I:2 = I
//
// A combinator's λ-term must be a block of binders over an applicative body;
// its type may be omitted, in which case it is inferred.  A schema is defined
// by a CL-term or a λ-term over its parameters; arity types are optional.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccs/formula.hpp"
#include "ccs/lambda.hpp"
#include "ccs/term.hpp"
#include "ccs/unify.hpp"

namespace ccs {

// Arity type; kUnknownArity stands for "not declared".
inline constexpr int kUnknownArity = -1;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Axiom {
  std::string id;
  Formula formula;
  int arity = 0;
};

class AxiomTable {
 public:
  void add(Axiom ax) {
    if (index_.count(ax.id)) throw std::invalid_argument("duplicate axiom id " + ax.id);
    index_.emplace(ax.id, entries_.size());
    entries_.push_back(std::move(ax));
  }
  const Axiom* find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }
  const std::vector<Axiom>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Axiom> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct CombinatorDef {
  std::string name;
  std::vector<std::string> params;  // binders of the defining λ-term
  ProofTerm body;                   // applicative body over the params
  LambdaTerm lambda = LambdaTerm::constant("?");
  Formula type;                     // principal type, implication symbol "imp"
  std::optional<ProofTerm> alt;

  std::size_t arity() const { return params.size(); }
  // A combinator duplicates when some parameter occurs more than once in its body.
  bool duplicating() const {
    for (const auto& p : params) {
      std::size_t n = 0;
      count_leaf(body, p, n);
      if (n > 1) return true;
    }
    return false;
  }
  ProofTerm lhs() const {
    ProofTerm t = ProofTerm::leaf(name);
    for (const auto& p : params) t = ProofTerm::app(t, ProofTerm::leaf(p));
    return t;
  }

 private:
  static void count_leaf(const ProofTerm& t, const std::string& id, std::size_t& n) {
    if (t.is_leaf()) {
      n += t.id() == id;
      return;
    }
    for (const auto& c : t.children()) count_leaf(c, id, n);
  }
};

struct SchemaParam {
  std::string name;
  int arity = kUnknownArity;
  bool operator==(const SchemaParam&) const = default;
};

struct SchemaDef {
  std::string name;
  std::vector<SchemaParam> params;
  int result_arity = kUnknownArity;
  ProofTerm definition;  // CL-term over the parameter names
  std::optional<LambdaTerm> lambda;

  std::size_t occurrences(const std::string& param) const {
    std::size_t n = 0;
    auto walk = [&](auto&& self, const ProofTerm& t) -> void {
      if (t.is_leaf()) {
        n += t.id() == param;
        return;
      }
      for (const auto& c : t.children()) self(self, c);
    };
    walk(walk, definition);
    return n;
  }
  bool linear() const {
    return std::all_of(params.begin(), params.end(),
                       [&](const SchemaParam& p) { return occurrences(p.name) == 1; });
  }
  bool is_param(const std::string& id) const {
    return std::any_of(params.begin(), params.end(), [&](const SchemaParam& p) { return p.name == id; });
  }
};

template <class Def>
class NamedTable {
 public:
  void add(Def d) {
    auto it = index_.find(d.name);
    if (it != index_.end()) {
      entries_[it->second] = std::move(d);
      return;
    }
    index_.emplace(d.name, entries_.size());
    entries_.push_back(std::move(d));
  }
  const Def* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  const std::vector<Def>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Def> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

using CombinatorTable = NamedTable<CombinatorDef>;
using SchemaTable = NamedTable<SchemaDef>;

struct Calculus {
  CombinatorTable combinators;
  SchemaTable schemas;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view s) {
  auto h = s.find('#');
  return h == std::string_view::npos ? s : s.substr(0, h);
}

// Position of keyword `kw` as a standalone word, or npos.
inline std::size_t find_word(std::string_view s, std::string_view kw) {
  for (std::size_t p = s.find(kw); p != std::string_view::npos; p = s.find(kw, p + 1)) {
    bool left = p == 0 || !ident_char(s[p - 1]);
    bool right = p + kw.size() >= s.size() || !ident_char(s[p + kw.size()]);
    if (left && right) return p;
  }
  return std::string_view::npos;
}

inline int parse_arity(Cursor& cur) {
  std::string a = cur.ident();
  if (!is_numeric(a)) cur.fail("arity type must be a natural number");
  return std::stoi(a);
}

}  // namespace detail

inline CombinatorDef make_combinator(std::string name, std::string_view lambda_text,
                                     std::optional<Formula> type = std::nullopt,
                                     std::optional<ProofTerm> alt = std::nullopt) {
  CombinatorDef d;
  d.name = std::move(name);
  d.lambda = parse_lambda(lambda_text);
  d.params = binders(d.lambda);
  const LambdaTerm& body = strip_binders(d.lambda);
  d.body = applicative_to_term(body);
  for (std::size_t i = 0; i < d.params.size(); ++i)
    for (std::size_t j = i + 1; j < d.params.size(); ++j)
      if (d.params[i] == d.params[j]) throw std::invalid_argument("repeated binder in " + d.name);
  if (type) {
    d.type = *type;
  } else {
    auto t = principal_type(d.lambda, "imp");
    if (!t) throw std::invalid_argument("combinator " + d.name + " has no principal type");
    d.type = canonical_variables(*t, "p");
  }
  d.alt = std::move(alt);
  return d;
}

inline void parse_config_line(std::string_view raw, std::size_t line_no, Calculus& out) {
  std::string_view line = detail::trim(detail::strip_comment(raw));
  if (line.empty()) return;
  try {
    if (line.substr(0, 11) == "combinator " || line == "combinator") {
      std::string_view rest = line.substr(10);
      auto eq = rest.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected '=' in combinator definition", line_no);
      std::string name(detail::trim(rest.substr(0, eq)));
      if (name.empty() || !std::all_of(name.begin(), name.end(), detail::ident_char))
        throw ConfigError("bad combinator name '" + name + "'", line_no);
      std::string_view def = rest.substr(eq + 1);
      std::optional<ProofTerm> alt;
      if (auto a = detail::find_word(def, "alt"); a != std::string_view::npos) {
        alt = parse_proof_term(def.substr(a + 3));
        def = def.substr(0, a);
      }
      std::optional<Formula> type;
      if (auto c = def.find("::"); c != std::string_view::npos) {
        type = parse_formula(def.substr(c + 2));
        def = def.substr(0, c);
      }
      out.combinators.add(make_combinator(std::move(name), detail::trim(def), type, alt));
      return;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected '=' in schema definition", line_no);
    detail::Cursor head(line.substr(0, eq));
    SchemaDef s;
    s.name = head.ident();
    if (head.accept("(")) {
      do {
        SchemaParam p;
        p.name = head.ident();
        if (head.accept(":")) p.arity = detail::parse_arity(head);
        if (s.is_param(p.name)) throw ConfigError("repeated parameter " + p.name, line_no);
        s.params.push_back(std::move(p));
      } while (head.accept(","));
      head.expect(")");
    }
    if (head.accept(":")) s.result_arity = detail::parse_arity(head);
    if (!head.at_end()) head.fail("unexpected text in schema head");
    std::string_view def = detail::trim(line.substr(eq + 1));
    if (!def.empty() && def.front() == '\\') {
      LambdaTerm l = parse_lambda(def);
      s.definition = lambda_to_cl(l);
      s.lambda = std::move(l);
    } else {
      s.definition = parse_proof_term(def);
    }
    for (const auto& p : s.params)
      if (s.occurrences(p.name) == 0)
        throw ConfigError("parameter " + p.name + " does not occur in the definition of " + s.name, line_no);
    out.schemas.add(std::move(s));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), line_no);
  }
}

inline Calculus parse_config(std::string_view text, Calculus base = {}) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    parse_config_line(text.substr(start, end - start), ++line_no, base);
    start = end + 1;
  }
  return base;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Calculus load_config(const std::string& path, Calculus base = {}) {
  return parse_config(read_file(path), std::move(base));
}

inline constexpr std::string_view kBuiltinCombinators = R"(# name, defining λ-term, principal type, alternate definition
combinator S = \x y z. x z (y z) :: (p => (q => r)) => ((p => q) => (p => r))
combinator K = \x y. x :: p => (q => p)
combinator I = \x. x :: p => p
combinator B = \x y z. x (y z) :: (p => q) => ((r => p) => (r => q))
combinator C = \x y z. x z y :: (p => (q => r)) => (q => (p => r))
combinator S4 = \x y z u. x (y u) (z u) :: (p => (q => r)) => ((s => p) => ((s => q) => (s => r)))
combinator B4 = \x y z u. x (y (z u)) :: (p => q) => ((r => p) => ((s => r) => (s => q)))
combinator C4 = \x y z u. x (y u) z :: (p => (q => r)) => ((s => p) => (q => (s => r)))
combinator I' = \x y. y x :: p => ((p => q) => q) alt C I
combinator B' = \x y z. y (x z) :: (p => q) => ((q => r) => (p => r)) alt C B
combinator C* = \x y z. y z x :: p => ((q => (p => r)) => (q => r)) alt C C
combinator B'' = \x y z u. x y (z u) :: (p => (q => r)) => (p => ((s => q) => (s => r))) alt B B
)";

inline const CombinatorTable& builtin_combinators() {
  static const CombinatorTable table = parse_config(kBuiltinCombinators).combinators;
  return table;
}

inline Calculus default_calculus() {
  Calculus c;
  c.combinators = builtin_combinators();
  return c;
}

inline std::string print_schema_head(const SchemaDef& s) {
  std::string out = s.name;
  if (!s.params.empty()) {
    out += '(';
    for (std::size_t i = 0; i < s.params.size(); ++i) {
      if (i) out += ',';
      out += s.params[i].name;
      if (s.params[i].arity != kUnknownArity) out += ':' + std::to_string(s.params[i].arity);
    }
    out += ')';
  }
  if (s.result_arity != kUnknownArity) out += ':' + std::to_string(s.result_arity);
  return out;
}

}  // namespace ccs
