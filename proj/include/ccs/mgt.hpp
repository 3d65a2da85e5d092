#pragma once

// Most general theorems of proof terms.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccs/formula.hpp"
#include "ccs/rewrite.hpp"
#include "ccs/tables.hpp"
#include "ccs/term.hpp"
#include "ccs/unify.hpp"

namespace ccs {

// Everything a proof term's leaves and schema nodes can refer to.
// Combinator types are kept in terms of `implication`.
struct Theory {
  std::string implication = "imp";
  AxiomTable axioms;
  CombinatorTable combinators;
  SchemaTable schemas;

  Theory() = default;
  Theory(std::string imp, AxiomTable ax, const Calculus& calc)
      : implication(std::move(imp)), axioms(std::move(ax)), schemas(calc.schemas) {
    for (const auto& c : calc.combinators.entries()) {
      CombinatorDef d = c;
      d.type = retarget_implication(d.type, "imp", implication);
      combinators.add(std::move(d));
    }
  }

  bool is_combinator(const std::string& id) const { return combinators.contains(id) && !axioms.find(id); }
};

// Implication chain with `arity` antecedents over fresh variables; arity 0
// (or unknown) gives a single fresh variable.
inline Formula arity_shape(int arity, const std::string& imp, VarSupply& vars) {
  Formula f = vars.fresh_var();
  for (int i = 0; i < arity; ++i) f = implication(imp, vars.fresh_var(), f);
  return f;
}

struct MgtOptions {
  // Constrain schema arguments and results to the implication shape of their
  // declared arity types.
  bool arity_shaping = false;
};

namespace detail {

class MgtComputer {
 public:
  MgtComputer(const Theory& th, MgtOptions opts) : th_(th), opts_(opts) {}

  std::optional<Formula> run(const ProofTerm& t) {
    TermStore::Id root = store_.intern(t);
    return node(root);
  }

  // Instance of `s` whose parameters have the given MGTs.
  std::optional<Formula> instance(const SchemaDef& s, const std::vector<Formula>& args) {
    std::unordered_map<std::string, Formula> params;
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto a = opts_.arity_shaping ? shaped(args[i], s.params[i].arity) : std::optional<Formula>(args[i]);
      if (!a) return std::nullopt;
      params.emplace(s.params[i].name, *a);
    }
    return definition(s, params);
  }

 private:
  std::optional<Formula> node(TermStore::Id t) {
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    std::optional<Formula> r;
    switch (store_.kind(t)) {
      case ProofTerm::Kind::Leaf:
        r = leaf(store_.name(t));
        break;
      case ProofTerm::Kind::App: {
        auto f = node(store_.fun(t));
        auto a = f ? node(store_.arg(t)) : std::nullopt;
        if (f && a) r = detach(*f, *a);
        break;
      }
      default: {
        const SchemaDef* s = th_.schemas.find(store_.name(t));
        if (!s) throw UnknownIdentifier("unknown schema " + store_.name(t));
        auto kids = store_.children(t);
        if (kids.size() != s->params.size())
          throw std::invalid_argument("schema " + s->name + " applied to " + std::to_string(kids.size()) +
                                      " arguments, expects " + std::to_string(s->params.size()));
        std::unordered_map<std::string, Formula> params;
        bool ok = true;
        for (std::size_t i = 0; i < kids.size() && ok; ++i) {
          auto a = node(kids[i]);
          if (a && opts_.arity_shaping) a = shaped(*a, s->params[i].arity);
          if (a) {
            params.emplace(s->params[i].name, *a);
          } else {
            ok = false;
          }
        }
        if (ok) r = definition(*s, params);
      }
    }
    memo_.emplace(t, r);
    return r;
  }

  std::optional<Formula> shaped(const Formula& f, int arity) {
    if (arity <= 0) return f;
    Formula g = fresh_variant(f, vars_);
    Formula shape = arity_shape(arity, th_.implication, vars_);
    Unifier u = mgu(g, shape);
    if (!u) return std::nullopt;
    return u.subst.apply(g);
  }

  std::optional<Formula> detach(const Formula& fun, const Formula& arg) {
    Formula f = fresh_variant(fun, vars_);
    Formula a = fresh_variant(arg, vars_);
    Formula y = vars_.fresh_var();
    Unifier u = mgu(f, implication(th_.implication, a, y));
    if (!u) return std::nullopt;
    return u.subst.apply(y);
  }

  std::optional<Formula> leaf(const std::string& id) {
    if (const Axiom* ax = th_.axioms.find(id)) return ax->formula;
    if (const SchemaDef* s = th_.schemas.find(id); s && s->params.empty()) return definition(*s, {});
    if (const CombinatorDef* c = th_.combinators.find(id)) return c->type;
    throw UnknownIdentifier("unknown identifier " + id);
  }

  // MGT of a schema definition with parameter leaves bound to formulas; each
  // parameter occurrence takes a fresh variant.  Other leaves of a definition
  // name combinators (or axioms), never schemas.
  std::optional<Formula> definition(const SchemaDef& s, const std::unordered_map<std::string, Formula>& params) {
    auto go = [&](auto&& self, const ProofTerm& d) -> std::optional<Formula> {
      if (d.is_leaf()) {
        if (auto it = params.find(d.id()); it != params.end()) return it->second;
        if (const Axiom* ax = th_.axioms.find(d.id())) return ax->formula;
        if (const CombinatorDef* c = th_.combinators.find(d.id())) return c->type;
        return leaf(d.id());
      }
      auto f = self(self, d.fun());
      auto a = f ? self(self, d.arg()) : std::nullopt;
      if (!f || !a) return std::nullopt;
      return detach(*f, *a);
    };
    std::optional<Formula> r;
    if (detail::contains_schema(s.definition)) {
      r = go(go, expand_schemas(s.definition, th_.schemas));
    } else {
      r = go(go, s.definition);
    }
    if (r && opts_.arity_shaping) r = shaped(*r, s.result_arity);
    return r;
  }

  const Theory& th_;
  MgtOptions opts_;
  VarSupply vars_;
  TermStore store_;
  std::unordered_map<TermStore::Id, std::optional<Formula>> memo_;
};

}  // namespace detail

// MGT of `t`, or nullopt when it is undefined.  Shared subterms are evaluated
// once and used as fresh variants, which coincides with the tree semantics
// where every leaf occurrence is a fresh copy.  Throws UnknownIdentifier.
inline std::optional<Formula> mgt(const ProofTerm& t, const Theory& th, MgtOptions opts = {}) {
  detail::MgtComputer c(th, opts);
  return c.run(t);
}

// MGT of a schema instance from the MGTs of its arguments.
inline std::optional<Formula> schema_instance_mgt(const SchemaDef& s, const std::vector<Formula>& args,
                                                  const Theory& th, MgtOptions opts = {}) {
  if (args.size() != s.params.size())
    throw std::invalid_argument("schema " + s.name + " expects " + std::to_string(s.params.size()) + " arguments");
  detail::MgtComputer c(th, opts);
  return c.instance(s, args);
}

// Independent MGT over the expanded tree: one formula variable per node, one
// equation per detachment step, solved by a single mgu.  Intended for checking
// small proofs; refuses trees with more than `max_nodes` inner nodes.
inline std::optional<Formula> mgt_by_constraints(const ProofTerm& t, const Theory& th,
                                                 std::uint64_t max_nodes = 200'000) {
  ProofTerm tree = expand_schemas(t, th.schemas);
  if (tree.tree_size() > max_nodes)
    throw std::invalid_argument("mgt_by_constraints: tree too large (" + std::to_string(tree.tree_size()) + ")");
  VarSupply vars;
  std::vector<FormulaPair> eqs;
  auto go = [&](auto&& self, const ProofTerm& u) -> Formula {
    if (u.is_leaf()) {
      if (const Axiom* ax = th.axioms.find(u.id())) return fresh_variant(ax->formula, vars);
      if (const CombinatorDef* c = th.combinators.find(u.id())) return fresh_variant(c->type, vars);
      throw UnknownIdentifier("unknown identifier " + u.id());
    }
    Formula f = self(self, u.fun());
    Formula a = self(self, u.arg());
    Formula n = vars.fresh_var();
    eqs.emplace_back(f, implication(th.implication, a, n));
    return n;
  };
  Formula root = go(go, tree);
  Unifier u = mgu(eqs);
  if (!u) return std::nullopt;
  return u.subst.apply(root);
}

// A proof proves `goal` iff its MGT is defined and subsumes the goal.
inline bool proves(const ProofTerm& t, const Formula& goal, const Theory& th, MgtOptions opts = {}) {
  auto m = mgt(t, th, opts);
  return m && subsumes(*m, goal);
}

}  // namespace ccs
