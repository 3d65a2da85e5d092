#pragma once

// Untyped λ-terms over constants, bracket abstraction into combinator terms
// and principal-type inference.
//
// Syntax:  lterm := "\" ident {ident} "." lterm | atom {atom}
//          atom  := ident | "(" lterm ")"
// Identifiers bound by an enclosing binder are variables, all others are
// constants (combinators, axiom ids, schema parameters).

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ccs/formula.hpp"
#include "ccs/term.hpp"
#include "ccs/unify.hpp"

namespace ccs {

class LambdaTerm {
 public:
  enum class Kind : std::uint8_t { Var, Const, Abs, App };

  static LambdaTerm var(std::string name) { return make(Kind::Var, std::move(name), {}); }
  static LambdaTerm constant(std::string name) { return make(Kind::Const, std::move(name), {}); }
  static LambdaTerm abs(std::string var, LambdaTerm body) {
    return make(Kind::Abs, std::move(var), {std::move(body)});
  }
  static LambdaTerm app(LambdaTerm f, LambdaTerm a) {
    return make(Kind::App, {}, {std::move(f), std::move(a)});
  }

  Kind kind() const { return node_->kind; }
  // Variable or constant name, or the bound variable of an abstraction.
  const std::string& name() const { return node_->name; }
  const LambdaTerm& body() const { return node_->kids[0]; }
  const LambdaTerm& fun() const { return node_->kids[0]; }
  const LambdaTerm& arg() const { return node_->kids[1]; }

  friend bool operator==(const LambdaTerm& a, const LambdaTerm& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name() || a.node_->kids.size() != b.node_->kids.size())
      return false;
    for (std::size_t i = 0; i < a.node_->kids.size(); ++i)
      if (!(a.node_->kids[i] == b.node_->kids[i])) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<LambdaTerm> kids;
  };
  static LambdaTerm make(Kind k, std::string name, std::vector<LambdaTerm> kids) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->kids = std::move(kids);
    return LambdaTerm(std::move(n));
  }
  explicit LambdaTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline std::vector<std::string> binders(const LambdaTerm& t) {
  std::vector<std::string> out;
  const LambdaTerm* cur = &t;
  while (cur->kind() == LambdaTerm::Kind::Abs) {
    out.push_back(cur->name());
    cur = &cur->body();
  }
  return out;
}

inline const LambdaTerm& strip_binders(const LambdaTerm& t) {
  const LambdaTerm* cur = &t;
  while (cur->kind() == LambdaTerm::Kind::Abs) cur = &cur->body();
  return *cur;
}

inline bool free_in(const std::string& v, const LambdaTerm& t) {
  switch (t.kind()) {
    case LambdaTerm::Kind::Var:
      return t.name() == v;
    case LambdaTerm::Kind::Const:
      return false;
    case LambdaTerm::Kind::Abs:
      return t.name() != v && free_in(v, t.body());
    default:
      return free_in(v, t.fun()) || free_in(v, t.arg());
  }
}

namespace detail {

inline LambdaTerm parse_lterm(Cursor& cur, std::vector<std::string>& bound);

inline LambdaTerm parse_latom(Cursor& cur, std::vector<std::string>& bound) {
  if (cur.accept("(")) {
    LambdaTerm t = parse_lterm(cur, bound);
    cur.expect(")");
    return t;
  }
  std::string id = cur.ident();
  for (auto it = bound.rbegin(); it != bound.rend(); ++it)
    if (*it == id) return LambdaTerm::var(std::move(id));
  return LambdaTerm::constant(std::move(id));
}

inline LambdaTerm parse_lterm(Cursor& cur, std::vector<std::string>& bound) {
  if (cur.accept("\\")) {
    std::vector<std::string> vars;
    while (!cur.accept(".")) vars.push_back(cur.ident());
    if (vars.empty()) cur.fail("binder without variables");
    std::size_t depth = bound.size();
    bound.insert(bound.end(), vars.begin(), vars.end());
    LambdaTerm body = parse_lterm(cur, bound);
    bound.resize(depth);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = LambdaTerm::abs(*it, std::move(body));
    return body;
  }
  LambdaTerm t = parse_latom(cur, bound);
  while (true) {
    char c = cur.peek();
    if (c == '\\') {
      t = LambdaTerm::app(std::move(t), parse_lterm(cur, bound));
      break;
    }
    if (c == '(' || (c != '\0' && ident_char(c))) {
      t = LambdaTerm::app(std::move(t), parse_latom(cur, bound));
    } else {
      break;
    }
  }
  return t;
}

inline void print_lterm(const LambdaTerm& t, bool as_arg, bool as_fun, std::string& out) {
  switch (t.kind()) {
    case LambdaTerm::Kind::Var:
    case LambdaTerm::Kind::Const:
      out += t.name();
      return;
    case LambdaTerm::Kind::Abs: {
      if (as_arg || as_fun) out += '(';
      out += '\\';
      const LambdaTerm* cur = &t;
      bool first = true;
      while (cur->kind() == LambdaTerm::Kind::Abs) {
        if (!first) out += ' ';
        out += cur->name();
        first = false;
        cur = &cur->body();
      }
      out += ". ";
      print_lterm(*cur, false, false, out);
      if (as_arg || as_fun) out += ')';
      return;
    }
    case LambdaTerm::Kind::App:
      if (as_arg) out += '(';
      print_lterm(t.fun(), false, true, out);
      out += ' ';
      print_lterm(t.arg(), true, false, out);
      if (as_arg) out += ')';
      return;
  }
}

}  // namespace detail

inline LambdaTerm parse_lambda(std::string_view text) {
  detail::Cursor cur(text);
  std::vector<std::string> bound;
  LambdaTerm t = detail::parse_lterm(cur, bound);
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return t;
}

inline std::string print_lambda(const LambdaTerm& t) {
  std::string out;
  detail::print_lterm(t, false, false, out);
  return out;
}

// η-normal form: \x. M x becomes M whenever x is not free in M.
inline LambdaTerm eta_reduce(const LambdaTerm& t) {
  switch (t.kind()) {
    case LambdaTerm::Kind::Abs: {
      LambdaTerm b = eta_reduce(t.body());
      if (b.kind() == LambdaTerm::Kind::App && b.arg().kind() == LambdaTerm::Kind::Var &&
          b.arg().name() == t.name() && !free_in(t.name(), b.fun()))
        return b.fun();
      return LambdaTerm::abs(t.name(), std::move(b));
    }
    case LambdaTerm::Kind::App:
      return LambdaTerm::app(eta_reduce(t.fun()), eta_reduce(t.arg()));
    default:
      return t;
  }
}

// Converts an applicative λ-term (no abstractions) into a proof term.
inline ProofTerm applicative_to_term(const LambdaTerm& t) {
  switch (t.kind()) {
    case LambdaTerm::Kind::Abs:
      throw std::invalid_argument("abstraction inside an applicative body: " + print_lambda(t));
    case LambdaTerm::Kind::App:
      return ProofTerm::app(applicative_to_term(t.fun()), applicative_to_term(t.arg()));
    default:
      return ProofTerm::leaf(t.name());
  }
}

inline LambdaTerm term_to_lambda(const ProofTerm& t) {
  switch (t.kind()) {
    case ProofTerm::Kind::Leaf:
      return LambdaTerm::constant(t.id());
    case ProofTerm::Kind::App:
      return LambdaTerm::app(term_to_lambda(t.fun()), term_to_lambda(t.arg()));
    default:
      throw std::invalid_argument("schema instance " + t.id() + " has no λ reading");
  }
}

// ---------------------------------------------------------------------------
// Bracket abstraction

struct BracketOptions {
  // Use S4, B4 and C4 (the 4-ary optimizations); off restricts the output to S, K, I, B, C.
  bool four_ary = true;
};

namespace detail {

class Abstractor {
 public:
  explicit Abstractor(BracketOptions opts) : opts_(opts) {}

  ProofTerm translate(const LambdaTerm& t, std::vector<std::pair<std::string, std::string>>& scope) {
    switch (t.kind()) {
      case LambdaTerm::Kind::Var:
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == t.name()) return ProofTerm::leaf(it->second);
        throw std::invalid_argument("unbound variable " + t.name());
      case LambdaTerm::Kind::Const:
        return ProofTerm::leaf(t.name());
      case LambdaTerm::Kind::App:
        return ProofTerm::app(translate(t.fun(), scope), translate(t.arg(), scope));
      default: {
        // '$' cannot appear in parsed identifiers, so internal names never capture constants.
        std::string internal = "$" + std::to_string(counter_++);
        scope.emplace_back(t.name(), internal);
        ProofTerm body = translate(t.body(), scope);
        scope.pop_back();
        return abstract(internal, body);
      }
    }
  }

 private:
  static bool mentions(const std::string& v, const ProofTerm& t) {
    if (t.is_leaf()) return t.id() == v;
    for (const auto& c : t.children())
      if (mentions(v, c)) return true;
    return false;
  }
  static ProofTerm L(const char* n) { return ProofTerm::leaf(n); }
  static ProofTerm ap(ProofTerm a, ProofTerm b) { return ProofTerm::app(std::move(a), std::move(b)); }
  static bool head_is(const ProofTerm& t, const char* name, int nargs) {
    const ProofTerm* cur = &t;
    for (int i = 0; i < nargs; ++i) {
      if (!cur->is_app()) return false;
      cur = &cur->fun();
    }
    return cur->is_leaf() && cur->id() == name;
  }

  ProofTerm abstract(const std::string& x, const ProofTerm& e) {
    if (e.is_leaf() && e.id() == x) return L("I");
    if (!mentions(x, e)) return ap(L("K"), e);
    // e is an application mentioning x
    if (e.arg().is_leaf() && e.arg().id() == x && !mentions(x, e.fun())) return e.fun();
    return combine(abstract(x, e.fun()), abstract(x, e.arg()));
  }

  // Optimized S p q.
  ProofTerm combine(const ProofTerm& p, const ProofTerm& q) {
    bool kp = head_is(p, "K", 1);
    bool kq = head_is(q, "K", 1);
    if (kp && kq) return ap(L("K"), ap(p.arg(), q.arg()));
    if (kp && q.is_leaf() && q.id() == "I") return p.arg();
    if (kp && opts_.four_ary && head_is(q, "B", 2))
      return ap(ap(ap(L("B4"), p.arg()), q.fun().arg()), q.arg());
    if (kp) return ap(ap(L("B"), p.arg()), q);
    if (opts_.four_ary && kq && head_is(p, "B", 2))
      return ap(ap(ap(L("C4"), p.fun().arg()), p.arg()), q.arg());
    if (kq) return ap(ap(L("C"), p), q.arg());
    if (opts_.four_ary && head_is(p, "B", 2)) return ap(ap(ap(L("S4"), p.fun().arg()), p.arg()), q);
    return ap(ap(L("S"), p), q);
  }

  BracketOptions opts_;
  std::size_t counter_ = 0;
};

}  // namespace detail

// Combinator term equivalent to the closed λ-term `l` (η-reduced first).
inline ProofTerm lambda_to_cl(const LambdaTerm& l, BracketOptions opts = {}) {
  detail::Abstractor a(opts);
  std::vector<std::pair<std::string, std::string>> scope;
  return a.translate(eta_reduce(l), scope);
}

// ---------------------------------------------------------------------------
// Principal types

// Principal type of `l` under the implication symbol `imp`.  `const_type`
// supplies the type of a constant (each occurrence is taken as a fresh
// variant); returning nullopt makes the constant's type unconstrained.
inline std::optional<Formula> principal_type(
    const LambdaTerm& l, const std::string& imp,
    const std::function<std::optional<Formula>(const std::string&)>& const_type = {}) {
  VarSupply vars;
  std::vector<FormulaPair> eqs;
  std::vector<std::pair<std::string, Formula>> env;
  auto infer = [&](auto&& self, const LambdaTerm& t) -> Formula {
    switch (t.kind()) {
      case LambdaTerm::Kind::Var:
        for (auto it = env.rbegin(); it != env.rend(); ++it)
          if (it->first == t.name()) return it->second;
        throw std::invalid_argument("unbound variable " + t.name());
      case LambdaTerm::Kind::Const: {
        std::optional<Formula> ty = const_type ? const_type(t.name()) : std::nullopt;
        return ty ? fresh_variant(*ty, vars) : vars.fresh_var();
      }
      case LambdaTerm::Kind::Abs: {
        Formula x = vars.fresh_var();
        env.emplace_back(t.name(), x);
        Formula b = self(self, t.body());
        env.pop_back();
        return implication(imp, x, b);
      }
      default: {
        Formula f = self(self, t.fun());
        Formula a = self(self, t.arg());
        Formula r = vars.fresh_var();
        eqs.emplace_back(f, implication(imp, a, r));
        return r;
      }
    }
  };
  Formula ty = infer(infer, l);
  Unifier u = mgu(eqs);
  if (!u) return std::nullopt;
  return u.subst.apply(ty);
}

}  // namespace ccs
