#pragma once

// First-order terms used as formulas, plus their textual syntax.
//
// Syntax:  formula := primary [ "=>" formula ]        (right associative)
//          primary := "(" formula ")" | ident [ "(" formula {"," formula} ")" ]
// A bare identifier is a variable if it was declared as one, or if it starts
// with an uppercase letter, an underscore, or one of p q r s u v w x y z.
// "=>" denotes the configured implication symbol.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ccs {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '*';
}

// Shared lexer helper for the small recursive-descent parsers in this library.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  // Next raw character without skipping whitespace.
  char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }
  bool at_ident() {
    skip_ws();
    return pos_ < text_.size() && ident_char(text_[pos_]);
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

class Formula {
 public:
  enum class Kind : std::uint8_t { Var, Fun };

  Formula() : Formula(fun("$nil")) {}

  static Formula var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->hash = detail::hash_mix(std::hash<std::string>{}(name), 0x51);
    n->name = std::move(name);
    n->ground = false;
    n->size = 1;
    return Formula(std::move(n));
  }

  static Formula fun(std::string symbol, std::vector<Formula> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Fun;
    std::size_t h = detail::hash_mix(std::hash<std::string>{}(symbol), args.size());
    bool ground = true;
    std::size_t size = 1;
    for (const auto& a : args) {
      h = detail::hash_mix(h, a.hash());
      ground = ground && a.is_ground();
      size += a.size();
    }
    n->name = std::move(symbol);
    n->args = std::move(args);
    n->hash = h;
    n->ground = ground;
    n->size = size;
    return Formula(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::Var; }
  // Variable name, or function symbol.
  const std::string& name() const { return node_->name; }
  const std::vector<Formula>& args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  std::size_t hash() const { return node_->hash; }
  bool is_ground() const { return node_->ground; }
  // Number of symbol occurrences (tree size).
  std::size_t size() const { return node_->size; }
  bool same_node(const Formula& o) const { return node_ == o.node_; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name() ||
        a.arity() != b.arity())
      return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a.args()[i] == b.args()[i])) return false;
    return true;
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Formula> args;
    std::size_t hash;
    bool ground;
    std::size_t size;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

inline Formula implication(const std::string& symbol, Formula antecedent, Formula consequent) {
  return Formula::fun(symbol, {std::move(antecedent), std::move(consequent)});
}

inline bool is_implication(const Formula& f, const std::string& symbol) {
  return !f.is_var() && f.arity() == 2 && f.name() == symbol;
}

// Variables in order of first occurrence.
inline std::vector<std::string> variables_of(const Formula& f) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::vector<const Formula*> stack{&f};
  // Preorder, left to right.
  while (!stack.empty()) {
    const Formula* t = stack.back();
    stack.pop_back();
    if (t->is_ground()) continue;
    if (t->is_var()) {
      if (seen.insert(t->name()).second) out.push_back(t->name());
      continue;
    }
    for (std::size_t i = t->arity(); i-- > 0;) stack.push_back(&t->args()[i]);
  }
  return out;
}

inline bool occurs_in(const std::string& var, const Formula& f) {
  if (f.is_ground()) return false;
  if (f.is_var()) return f.name() == var;
  for (const auto& a : f.args())
    if (occurs_in(var, a)) return true;
  return false;
}

// Renames every function symbol `from` of arity 2 to `to`.
inline Formula retarget_implication(const Formula& f, const std::string& from,
                                    const std::string& to) {
  if (from == to || f.is_var()) return f;
  std::vector<Formula> args;
  args.reserve(f.arity());
  for (const auto& a : f.args()) args.push_back(retarget_implication(a, from, to));
  std::string sym = (f.arity() == 2 && f.name() == from) ? to : f.name();
  return Formula::fun(std::move(sym), std::move(args));
}

// Generates variable names that cannot clash with parsed ones.
class VarSupply {
 public:
  std::string fresh() { return "_" + std::to_string(next_++); }
  Formula fresh_var() { return Formula::var(fresh()); }
  std::size_t issued() const { return next_; }

 private:
  std::size_t next_ = 0;
};

struct FormulaSyntax {
  std::string implication = "imp";
  std::set<std::string> declared_vars;

  bool is_variable_name(const std::string& id) const {
    if (declared_vars.count(id)) return true;
    char c = id.front();
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') return true;
    static constexpr std::string_view kVarInitials = "pqrsuvwxyz";
    return kVarInitials.find(c) != std::string_view::npos;
  }
};

namespace detail {

inline void print_formula(const Formula& f, const std::string& imp, bool parenthesize,
                          std::string& out) {
  if (f.is_var()) {
    out += f.name();
    return;
  }
  if (!imp.empty() && is_implication(f, imp)) {
    if (parenthesize) out += '(';
    print_formula(f.args()[0], imp, true, out);
    out += " => ";
    print_formula(f.args()[1], imp, false, out);
    if (parenthesize) out += ')';
    return;
  }
  out += f.name();
  if (f.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (i) out += ',';
    print_formula(f.args()[i], imp, false, out);
  }
  out += ')';
}

inline Formula parse_formula_at(Cursor& cur, const FormulaSyntax& syn);

inline Formula parse_primary(Cursor& cur, const FormulaSyntax& syn) {
  if (cur.accept("(")) {
    Formula f = parse_formula_at(cur, syn);
    cur.expect(")");
    return f;
  }
  std::string id = cur.ident();
  if (cur.peek_raw() == '(') {
    cur.expect("(");
    std::vector<Formula> args;
    if (!cur.accept(")")) {
      do {
        args.push_back(parse_formula_at(cur, syn));
      } while (cur.accept(","));
      cur.expect(")");
    }
    return Formula::fun(std::move(id), std::move(args));
  }
  if (syn.is_variable_name(id)) return Formula::var(std::move(id));
  return Formula::fun(std::move(id));
}

inline Formula parse_formula_at(Cursor& cur, const FormulaSyntax& syn) {
  Formula lhs = parse_primary(cur, syn);
  if (cur.accept("=>")) {
    Formula rhs = parse_formula_at(cur, syn);
    return implication(syn.implication, std::move(lhs), std::move(rhs));
  }
  return lhs;
}

}  // namespace detail

// Prints `f`, writing the implication symbol `imp` infix as "=>" (pass an
// empty string to print everything in prefix notation).
inline std::string to_string(const Formula& f, const std::string& imp = "imp") {
  std::string out;
  detail::print_formula(f, imp, false, out);
  return out;
}

inline Formula parse_formula(std::string_view text, const FormulaSyntax& syn = {}) {
  detail::Cursor cur(text);
  Formula f = detail::parse_formula_at(cur, syn);
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return f;
}

}  // namespace ccs
