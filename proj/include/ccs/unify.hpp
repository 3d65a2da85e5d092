#pragma once

// Substitutions and syntactic unification over immutable formulas.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccs/formula.hpp"

namespace ccs {

using FormulaPair = std::pair<Formula, Formula>;

// Finite map from variables to formulas.  Always idempotent: no bound
// variable occurs in any binding's value, and no variable maps to itself.
class Substitution {
 public:
  Substitution() = default;

  // Closes `bindings` under composition so that the result is idempotent,
  // e.g. {x->f(y), y->a} becomes {x->f(a), y->a}.  Throws std::invalid_argument
  // on cyclic bindings.
  static Substitution normalized(const std::vector<std::pair<std::string, Formula>>& bindings);

  // Accepts `bindings` only when they are already idempotent.
  static std::optional<Substitution> strict(
      const std::vector<std::pair<std::string, Formula>>& bindings);

  const Formula* find(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
  }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<std::string, Formula>& bindings() const { return map_; }

  Formula apply(const Formula& f) const {
    if (map_.empty() || f.is_ground()) return f;
    if (f.is_var()) {
      const Formula* b = find(f.name());
      return b ? *b : f;
    }
    std::vector<Formula> args;
    args.reserve(f.arity());
    bool changed = false;
    for (const auto& a : f.args()) {
      args.push_back(apply(a));
      changed = changed || !args.back().same_node(a);
    }
    return changed ? Formula::fun(f.name(), std::move(args)) : f;
  }

  bool is_idempotent() const {
    for (const auto& [v, t] : map_) {
      if (t.is_var() && t.name() == v) return false;
      for (const auto& [w, _] : map_)
        if (occurs_in(w, t)) return false;
    }
    return true;
  }

 private:
  std::map<std::string, Formula> map_;
};

enum class UnifyStatus { Ok, Clash, OccursCheck };

struct Unifier {
  UnifyStatus status = UnifyStatus::Ok;
  Substitution subst;
  explicit operator bool() const { return status == UnifyStatus::Ok; }
};

namespace detail {

// Triangular binding store; values may mention other bound variables.
class TriangularBindings {
 public:
  const Formula* lookup(const std::string& v) const {
    auto it = bind_.find(v);
    return it == bind_.end() ? nullptr : &it->second;
  }
  // Follows variable chains.
  Formula walk(Formula t) const {
    while (t.is_var()) {
      const Formula* b = lookup(t.name());
      if (!b) break;
      t = *b;
    }
    return t;
  }
  bool occurs(const std::string& v, const Formula& t) const {
    std::unordered_set<std::string> visited;
    std::vector<Formula> stack{t};
    while (!stack.empty()) {
      Formula u = stack.back();
      stack.pop_back();
      if (u.is_ground()) continue;
      if (u.is_var()) {
        if (u.name() == v) return true;
        if (!visited.insert(u.name()).second) continue;
        if (const Formula* b = lookup(u.name())) stack.push_back(*b);
        continue;
      }
      for (const auto& a : u.args()) stack.push_back(a);
    }
    return false;
  }
  void bind(const std::string& v, Formula t) { bind_.insert_or_assign(v, std::move(t)); }

  // Fully substituted value, memoized per variable so shared structure stays shared.
  Formula resolve(const Formula& t) {
    if (t.is_ground()) return t;
    if (t.is_var()) {
      auto m = memo_.find(t.name());
      if (m != memo_.end()) return m->second;
      const Formula* b = lookup(t.name());
      Formula r = b ? resolve(*b) : t;
      memo_.emplace(t.name(), r);
      return r;
    }
    std::vector<Formula> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
      args.push_back(resolve(a));
      changed = changed || !args.back().same_node(a);
    }
    return changed ? Formula::fun(t.name(), std::move(args)) : t;
  }

  const std::unordered_map<std::string, Formula>& raw() const { return bind_; }

 private:
  std::unordered_map<std::string, Formula> bind_;
  std::unordered_map<std::string, Formula> memo_;
};

inline UnifyStatus unify_into(TriangularBindings& tb, std::vector<FormulaPair> work) {
  while (!work.empty()) {
    auto [a0, b0] = std::move(work.back());
    work.pop_back();
    Formula a = tb.walk(a0);
    Formula b = tb.walk(b0);
    if (a.same_node(b)) continue;
    if (a.is_var() && b.is_var() && a.name() == b.name()) continue;
    if (!a.is_var() && b.is_var()) std::swap(a, b);
    if (a.is_var()) {
      if (!b.is_var() && tb.occurs(a.name(), b)) return UnifyStatus::OccursCheck;
      tb.bind(a.name(), b);
      continue;
    }
    if (a.name() != b.name() || a.arity() != b.arity()) return UnifyStatus::Clash;
    if (a == b) continue;
    for (std::size_t i = 0; i < a.arity(); ++i) work.emplace_back(a.args()[i], b.args()[i]);
  }
  return UnifyStatus::Ok;
}

}  // namespace detail

inline Substitution Substitution::normalized(
    const std::vector<std::pair<std::string, Formula>>& bindings) {
  detail::TriangularBindings tb;
  for (const auto& [v, t] : bindings) {
    if (t.is_var() && t.name() == v) continue;
    tb.bind(v, t);
  }
  Substitution s;
  for (const auto& [v, t] : tb.raw()) {
    if (tb.occurs(v, t)) throw std::invalid_argument("cyclic substitution binding for " + v);
  }
  for (const auto& [v, _] : tb.raw()) {
    Formula r = tb.resolve(Formula::var(v));
    if (r.is_var() && r.name() == v) continue;
    s.map_.emplace(v, std::move(r));
  }
  return s;
}

inline std::optional<Substitution> Substitution::strict(
    const std::vector<std::pair<std::string, Formula>>& bindings) {
  Substitution s;
  for (const auto& [v, t] : bindings) {
    if (!s.map_.emplace(v, t).second) return std::nullopt;
  }
  if (!s.is_idempotent()) return std::nullopt;
  return s;
}

// Most general unifier of all pairs.  The result is idempotent and binds only
// variables of the input to formulas over input variables.
inline Unifier mgu(std::span<const FormulaPair> pairs) {
  detail::TriangularBindings tb;
  Unifier u;
  u.status = detail::unify_into(tb, std::vector<FormulaPair>(pairs.begin(), pairs.end()));
  if (!u) return u;
  std::vector<std::pair<std::string, Formula>> resolved;
  resolved.reserve(tb.raw().size());
  for (const auto& [v, _] : tb.raw()) resolved.emplace_back(v, tb.resolve(Formula::var(v)));
  auto s = Substitution::strict(resolved);
  // Resolution through the triangle is already idempotent; the fallback only
  // guards against variable-to-variable chains collapsing onto themselves.
  u.subst = s ? std::move(*s) : Substitution::normalized(resolved);
  return u;
}

inline Unifier mgu(const Formula& a, const Formula& b) {
  FormulaPair p{a, b};
  return mgu(std::span<const FormulaPair>(&p, 1));
}

inline bool subsumes(const Formula& general, const Formula& specific) {
  std::unordered_map<std::string, Formula> bind;
  std::vector<std::pair<Formula, Formula>> work{{general, specific}};
  while (!work.empty()) {
    auto [g, s] = std::move(work.back());
    work.pop_back();
    if (g.is_var()) {
      auto [it, inserted] = bind.emplace(g.name(), s);
      if (!inserted && it->second != s) return false;
      continue;
    }
    if (s.is_var() || g.name() != s.name() || g.arity() != s.arity()) return false;
    if (g.is_ground()) {
      if (g != s) return false;
      continue;
    }
    for (std::size_t i = 0; i < g.arity(); ++i) work.emplace_back(g.args()[i], s.args()[i]);
  }
  return true;
}

// Equal up to a bijective renaming of variables.
inline bool alpha_equivalent(const Formula& a, const Formula& b) {
  std::unordered_map<std::string, std::string> fwd, bwd;
  std::vector<std::pair<Formula, Formula>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = std::move(work.back());
    work.pop_back();
    if (x.is_var() != y.is_var()) return false;
    if (x.is_var()) {
      auto [f, fi] = fwd.emplace(x.name(), y.name());
      auto [g, gi] = bwd.emplace(y.name(), x.name());
      if (f->second != y.name() || g->second != x.name()) return false;
      continue;
    }
    if (x.name() != y.name() || x.arity() != y.arity()) return false;
    for (std::size_t i = 0; i < x.arity(); ++i) work.emplace_back(x.args()[i], y.args()[i]);
  }
  return true;
}

// Simultaneous variable renaming; variables missing from `ren` are kept.
inline Formula rename_variables(const Formula& f,
                                const std::unordered_map<std::string, std::string>& ren) {
  if (f.is_ground()) return f;
  if (f.is_var()) {
    auto it = ren.find(f.name());
    return it == ren.end() ? f : Formula::var(it->second);
  }
  std::vector<Formula> args;
  args.reserve(f.arity());
  for (const auto& a : f.args()) args.push_back(rename_variables(a, ren));
  return Formula::fun(f.name(), std::move(args));
}

// Injective renaming of all variables to fresh ones drawn from `vars`.
inline Formula fresh_variant(const Formula& f, VarSupply& vars) {
  if (f.is_ground()) return f;
  std::unordered_map<std::string, std::string> ren;
  for (const auto& v : variables_of(f)) ren.emplace(v, vars.fresh());
  return rename_variables(f, ren);
}

// Renames variables to <prefix>0, <prefix>1, ... in order of first occurrence.
inline Formula canonical_variables(const Formula& f, const std::string& prefix = "X") {
  std::unordered_map<std::string, std::string> ren;
  std::size_t i = 0;
  for (const auto& v : variables_of(f)) ren.emplace(v, prefix + std::to_string(i++));
  return rename_variables(f, ren);
}

}  // namespace ccs
