#pragma once

// Mutable term heap for the prover's inner loop: destructive unification with
// a trail, undo to a mark, and compact templates for stored formulas.

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccs/formula.hpp"

namespace ccs::engine {

using Ref = std::uint32_t;
inline constexpr Ref kUnbound = std::numeric_limits<Ref>::max();
inline constexpr std::int32_t kVarSym = -1;

class SymbolTable {
 public:
  std::int32_t intern(const std::string& name, std::size_t arity) {
    auto key = std::make_pair(name, arity);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    std::int32_t id = static_cast<std::int32_t>(names_.size());
    names_.push_back(name);
    arities_.push_back(static_cast<std::uint32_t>(arity));
    ids_.emplace(std::move(key), id);
    return id;
  }
  const std::string& name(std::int32_t s) const { return names_[s]; }
  std::uint32_t arity(std::int32_t s) const { return arities_[s]; }

 private:
  std::vector<std::string> names_;
  std::vector<std::uint32_t> arities_;
  std::map<std::pair<std::string, std::size_t>, std::int32_t> ids_;
};

// Formula in prefix code: a value >= 0 is a symbol (its arguments follow),
// a value v < 0 is variable number -(v+1).  Variables are numbered by first
// occurrence, so equal templates mean α-equivalent formulas.
struct Template {
  std::vector<std::int32_t> code;
  std::uint32_t nvars = 0;
  bool operator==(const Template&) const = default;
};

inline Template make_template(const Formula& f, SymbolTable& syms) {
  Template t;
  std::unordered_map<std::string, std::int32_t> vars;
  auto go = [&](auto&& self, const Formula& g) -> void {
    if (g.is_var()) {
      auto [it, inserted] = vars.emplace(g.name(), static_cast<std::int32_t>(vars.size()));
      t.code.push_back(-(it->second + 1));
      return;
    }
    t.code.push_back(syms.intern(g.name(), g.arity()));
    for (const auto& a : g.args()) self(self, a);
  };
  go(go, f);
  t.nvars = static_cast<std::uint32_t>(vars.size());
  return t;
}

inline Formula template_formula(const Template& t, const SymbolTable& syms, const std::string& var_prefix = "X") {
  std::size_t pos = 0;
  auto go = [&](auto&& self) -> Formula {
    std::int32_t c = t.code[pos++];
    if (c < 0) return Formula::var(var_prefix + std::to_string(-(c + 1)));
    std::vector<Formula> args;
    for (std::uint32_t i = 0; i < syms.arity(c); ++i) args.push_back(self(self));
    return Formula::fun(syms.name(c), std::move(args));
  };
  return go(go);
}

class Heap {
 public:
  struct Mark {
    std::size_t cells, argv, trail;
  };

  explicit Heap(SymbolTable& syms) : syms_(&syms) {}

  Mark mark() const { return {cells_.size(), argv_.size(), trail_.size()}; }

  void undo(const Mark& m) {
    for (std::size_t i = trail_.size(); i-- > m.trail;) {
      Ref v = trail_[i];
      if (v < m.cells) cells_[v].val = kUnbound;
    }
    trail_.resize(m.trail);
    cells_.resize(m.cells);
    argv_.resize(m.argv);
  }

  Ref new_var() {
    cells_.push_back({kVarSym, kUnbound});
    return static_cast<Ref>(cells_.size() - 1);
  }

  Ref new_fun(std::int32_t sym, std::span<const Ref> args) {
    Ref first = static_cast<Ref>(argv_.size());
    argv_.insert(argv_.end(), args.begin(), args.end());
    cells_.push_back({sym, first});
    return static_cast<Ref>(cells_.size() - 1);
  }

  Ref deref(Ref r) const {
    while (cells_[r].sym == kVarSym && cells_[r].val != kUnbound) r = cells_[r].val;
    return r;
  }
  bool is_var(Ref r) const { return cells_[r].sym == kVarSym; }
  std::int32_t sym(Ref r) const { return cells_[r].sym; }
  Ref arg(Ref r, std::uint32_t i) const { return argv_[cells_[r].val + i]; }

  // Root symbol after dereferencing, or kVarSym for an unbound variable.
  std::int32_t head(Ref r) const { return cells_[deref(r)].sym; }

  // Fresh copy of `t`.
  Ref instantiate(const Template& t) {
    scratch_vars_.assign(t.nvars, kUnbound);
    std::size_t pos = 0;
    return build(t, pos);
  }

  // Builds `f`; variables are looked up in (and added to) `vars`.
  Ref from_formula(const Formula& f, std::unordered_map<std::string, Ref>& vars) {
    if (f.is_var()) {
      auto it = vars.find(f.name());
      if (it != vars.end()) return it->second;
      Ref v = new_var();
      vars.emplace(f.name(), v);
      return v;
    }
    Ref local[8];
    std::vector<Ref> big;
    std::span<Ref> args;
    if (f.arity() <= 8) {
      for (std::size_t i = 0; i < f.arity(); ++i) local[i] = from_formula(f.args()[i], vars);
      args = std::span<Ref>(local, f.arity());
    } else {
      for (const auto& a : f.args()) big.push_back(from_formula(a, vars));
      args = big;
    }
    std::int32_t s = syms_->intern(f.name(), f.arity());
    return new_fun(s, args);
  }

  // Unification with occurs check.  On failure bindings made so far remain;
  // callers undo to their mark.
  bool unify(Ref a, Ref b) {
    stack_.clear();
    stack_.emplace_back(a, b);
    while (!stack_.empty()) {
      auto [x0, y0] = stack_.back();
      stack_.pop_back();
      Ref x = deref(x0);
      Ref y = deref(y0);
      if (x == y) continue;
      bool xv = is_var(x), yv = is_var(y);
      if (xv && yv) {
        // Bind the younger variable so chains point to older cells.
        if (x < y) std::swap(x, y);
        bind(x, y);
        continue;
      }
      if (yv) std::swap(x, y), std::swap(xv, yv);
      if (xv) {
        if (occurs(x, y)) return false;
        bind(x, y);
        continue;
      }
      if (cells_[x].sym != cells_[y].sym) return false;
      std::uint32_t n = syms_->arity(cells_[x].sym);
      for (std::uint32_t i = 0; i < n; ++i) stack_.emplace_back(arg(x, i), arg(y, i));
    }
    return true;
  }

  Template extract(Ref r) const {
    Template t;
    std::unordered_map<Ref, std::int32_t> vars;
    auto go = [&](auto&& self, Ref x) -> void {
      x = deref(x);
      if (is_var(x)) {
        auto [it, inserted] = vars.emplace(x, static_cast<std::int32_t>(vars.size()));
        t.code.push_back(-(it->second + 1));
        return;
      }
      t.code.push_back(cells_[x].sym);
      std::uint32_t n = syms_->arity(cells_[x].sym);
      for (std::uint32_t i = 0; i < n; ++i) self(self, arg(x, i));
    };
    go(go, r);
    t.nvars = static_cast<std::uint32_t>(vars.size());
    return t;
  }

  Formula to_formula(Ref r, const std::string& var_prefix = "X") const {
    return template_formula(extract(r), *syms_, var_prefix);
  }

  std::size_t size() const { return cells_.size(); }

 private:
  struct Cell {
    std::int32_t sym;
    Ref val;  // variable: binding or kUnbound; compound: first argument index in argv
  };

  Ref build(const Template& t, std::size_t& pos) {
    std::int32_t c = t.code[pos++];
    if (c < 0) {
      Ref& v = scratch_vars_[-(c + 1)];
      if (v == kUnbound) v = new_var();
      return v;
    }
    std::uint32_t n = syms_->arity(c);
    Ref local[8];
    if (n <= 8) {
      for (std::uint32_t i = 0; i < n; ++i) local[i] = build(t, pos);
      return new_fun(c, std::span<const Ref>(local, n));
    }
    std::vector<Ref> big;
    for (std::uint32_t i = 0; i < n; ++i) big.push_back(build(t, pos));
    return new_fun(c, big);
  }

  void bind(Ref v, Ref target) {
    cells_[v].val = target;
    trail_.push_back(v);
  }

  bool occurs(Ref v, Ref t) {
    occ_.clear();
    occ_.push_back(t);
    while (!occ_.empty()) {
      Ref x = deref(occ_.back());
      occ_.pop_back();
      if (x == v) return true;
      if (is_var(x)) continue;
      std::uint32_t n = syms_->arity(cells_[x].sym);
      for (std::uint32_t i = 0; i < n; ++i) occ_.push_back(arg(x, i));
    }
    return false;
  }

  SymbolTable* syms_;
  std::vector<Cell> cells_;
  std::vector<Ref> argv_;
  std::vector<Ref> trail_;
  std::vector<Ref> scratch_vars_;
  std::vector<std::pair<Ref, Ref>> stack_;
  std::vector<Ref> occ_;
};

}  // namespace ccs::engine
