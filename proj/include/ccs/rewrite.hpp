#pragma once

// Term rewriting over proof terms: combinator reduction, schema expansion
// and the post-search simplification rules.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccs/tables.hpp"
#include "ccs/term.hpp"

namespace ccs {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownIdentifier : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultStepBudget = 1'000'000;

struct NormalizeResult {
  ProofTerm term;
  bool pure = true;  // no combinator leaf survives
  std::size_t steps = 0;
};

namespace detail {

class Normalizer {
 public:
  Normalizer(const CombinatorTable& combs, std::size_t budget) : combs_(combs), budget_(budget) {}

  NormalizeResult run(const ProofTerm& t) {
    TermStore::Id root = store_.intern(t);
    TermStore::Id nf = normal_form(root);
    NormalizeResult r;
    r.term = store_.extract(nf);
    r.steps = steps_;
    r.pure = !has_combinator(nf);
    return r;
  }

 private:
  TermStore::Id normal_form(TermStore::Id t) {
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    std::vector<TermStore::Id> args;
    TermStore::Id head = t;
    while (store_.is_app(head)) {
      args.push_back(store_.arg(head));
      head = store_.fun(head);
    }
    std::reverse(args.begin(), args.end());
    if (store_.kind(head) == ProofTerm::Kind::Schema)
      throw std::invalid_argument("normalize: schema instance " + store_.name(head) + " must be expanded first");
    TermStore::Id result;
    const CombinatorDef* c = combs_.find(store_.name(head));
    if (c && args.size() >= c->arity()) {
      if (++steps_ > budget_)
        throw BudgetExceeded("normalize: step budget of " + std::to_string(budget_) + " exceeded");
      std::unordered_map<std::string, TermStore::Id> bind;
      for (std::size_t i = 0; i < c->arity(); ++i) bind.emplace(c->params[i], args[i]);
      TermStore::Id r = instantiate(c->body, bind);
      for (std::size_t i = c->arity(); i < args.size(); ++i) r = store_.app(r, args[i]);
      result = normal_form(r);
    } else {
      result = head;
      for (TermStore::Id a : args) result = store_.app(result, normal_form(a));
    }
    memo_.emplace(t, result);
    return result;
  }

  TermStore::Id instantiate(const ProofTerm& body, const std::unordered_map<std::string, TermStore::Id>& bind) {
    if (body.is_leaf()) {
      auto it = bind.find(body.id());
      return it != bind.end() ? it->second : store_.leaf(body.id());
    }
    return store_.app(instantiate(body.fun(), bind), instantiate(body.arg(), bind));
  }

  bool has_combinator(TermStore::Id root) const {
    std::vector<TermStore::Id> stack{root};
    std::unordered_set<TermStore::Id> seen;
    while (!stack.empty()) {
      TermStore::Id t = stack.back();
      stack.pop_back();
      if (!seen.insert(t).second) continue;
      if (store_.is_leaf(t)) {
        if (combs_.contains(store_.name(t))) return true;
        continue;
      }
      for (auto c : store_.children(t)) stack.push_back(c);
    }
    return false;
  }

  const CombinatorTable& combs_;
  std::size_t budget_;
  std::size_t steps_ = 0;
  TermStore store_;
  std::unordered_map<TermStore::Id, TermStore::Id> memo_;
};

inline ProofTerm substitute_leaves(const ProofTerm& t, const std::unordered_map<std::string, ProofTerm>& bind) {
  switch (t.kind()) {
    case ProofTerm::Kind::Leaf: {
      auto it = bind.find(t.id());
      return it == bind.end() ? t : it->second;
    }
    case ProofTerm::Kind::App:
      return ProofTerm::app(substitute_leaves(t.fun(), bind), substitute_leaves(t.arg(), bind));
    default: {
      std::vector<ProofTerm> args;
      for (const auto& c : t.children()) args.push_back(substitute_leaves(c, bind));
      return ProofTerm::schema(t.id(), std::move(args));
    }
  }
}

inline bool contains_schema(const ProofTerm& t) {
  if (t.is_schema()) return true;
  for (const auto& c : t.children())
    if (contains_schema(c)) return true;
  return false;
}

}  // namespace detail

// Leftmost-outermost reduction with the combinator rules.  Shared subterms
// are reduced once.  Throws BudgetExceeded when more than `budget`
// contractions are needed.
inline NormalizeResult normalize(const ProofTerm& c, const CombinatorTable& combs,
                                 std::size_t budget = kDefaultStepBudget) {
  detail::Normalizer n(combs, budget);
  return n.run(c);
}

// Instance of a schema's definition for the given arguments.
inline ProofTerm instantiate_schema(const SchemaDef& s, const std::vector<ProofTerm>& args) {
  if (args.size() != s.params.size())
    throw std::invalid_argument("schema " + s.name + " expects " + std::to_string(s.params.size()) +
                                " arguments, got " + std::to_string(args.size()));
  std::unordered_map<std::string, ProofTerm> bind;
  for (std::size_t i = 0; i < args.size(); ++i) bind.emplace(s.params[i].name, args[i]);
  return detail::substitute_leaves(s.definition, bind);
}

// Replaces every schema instance (and every leaf naming a parameterless
// schema with a different definition) by its defining CL-term.
inline ProofTerm expand_schemas(const ProofTerm& t, const SchemaTable& schemas) {
  // Keys are kept alive next to their values so addresses cannot be reused.
  std::unordered_map<const void*, std::pair<ProofTerm, ProofTerm>> memo;
  auto go = [&](auto&& self, const ProofTerm& u, int depth) -> ProofTerm {
    if (depth > 64) throw std::invalid_argument("schema definitions nest too deeply (cyclic?)");
    auto it = memo.find(u.identity());
    if (it != memo.end()) return it->second.second;
    ProofTerm r;
    switch (u.kind()) {
      case ProofTerm::Kind::Leaf: {
        const SchemaDef* s = schemas.find(u.id());
        r = (s && s->params.empty() && s->definition != u) ? self(self, s->definition, depth + 1) : u;
        break;
      }
      case ProofTerm::Kind::App:
        r = ProofTerm::app(self(self, u.fun(), depth), self(self, u.arg(), depth));
        break;
      default: {
        const SchemaDef* s = schemas.find(u.id());
        if (!s) throw UnknownIdentifier("unknown schema " + u.id());
        std::vector<ProofTerm> args;
        for (const auto& c : u.children()) args.push_back(self(self, c, depth));
        ProofTerm inst = instantiate_schema(*s, args);
        r = detail::contains_schema(s->definition) ? self(self, inst, depth + 1) : inst;
      }
    }
    memo.emplace(u.identity(), std::make_pair(u, r));
    return r;
  };
  return go(go, t, 0);
}

// Per-factor expansion.  A factor whose expansion degenerates to a bare leaf
// is dropped and its label replaced by that leaf.
inline FactorList expand_schemas(const FactorList& fl, const SchemaTable& schemas) {
  FactorList out;
  std::unordered_map<std::string, ProofTerm> alias;
  for (const auto& f : fl.factors) {
    ProofTerm rhs = expand_schemas(detail::substitute_leaves(f.rhs, alias), schemas);
    if (rhs.is_leaf()) {
      alias.insert_or_assign(f.label, rhs);
      continue;
    }
    out.factors.push_back({f.label, std::move(rhs)});
  }
  auto a = alias.find(fl.root);
  out.root = a != alias.end() ? a->second.id() : fl.root;
  return out;
}

// True when every leaf of the schema's definition is one of its parameters.
inline bool combinator_free(const SchemaDef& s) {
  auto go = [&](auto&& self, const ProofTerm& t) -> bool {
    if (t.is_leaf()) return s.is_param(t.id());
    for (const auto& c : t.children())
      if (!self(self, c)) return false;
    return true;
  };
  return go(go, s.definition);
}

// Inlines combinator-free schemas and removes I in head position (I p ⊳ p).
inline ProofTerm simplify(const ProofTerm& t, const SchemaTable& schemas) {
  std::unordered_map<const void*, std::pair<ProofTerm, ProofTerm>> memo;
  auto go = [&](auto&& self, const ProofTerm& u) -> ProofTerm {
    auto it = memo.find(u.identity());
    if (it != memo.end()) return it->second.second;
    ProofTerm r = u;
    switch (u.kind()) {
      case ProofTerm::Kind::Leaf:
        break;
      case ProofTerm::Kind::App: {
        ProofTerm f = self(self, u.fun());
        ProofTerm a = self(self, u.arg());
        r = (f.is_leaf() && f.id() == "I") ? a : ProofTerm::app(std::move(f), std::move(a));
        break;
      }
      default: {
        std::vector<ProofTerm> args;
        for (const auto& c : u.children()) args.push_back(self(self, c));
        const SchemaDef* s = schemas.find(u.id());
        if (s && combinator_free(*s)) {
          r = self(self, instantiate_schema(*s, args));
        } else {
          r = ProofTerm::schema(u.id(), std::move(args));
        }
      }
    }
    memo.emplace(u.identity(), std::make_pair(u, r));
    return r;
  };
  return go(go, t);
}

inline FactorList simplify(const FactorList& fl, const SchemaTable& schemas,
                           const LabelPolicy& policy = {}) {
  return to_factor_list(simplify(from_factor_list(fl), schemas), policy);
}

}  // namespace ccs
