#pragma once

// Schema rules in resolution form and machine checks of the combinator table.

#include <optional>
#include <string>
#include <vector>

#include "ccs/lambda.hpp"
#include "ccs/mgt.hpp"
#include "ccs/rewrite.hpp"
#include "ccs/tables.hpp"
#include "ccs/unify.hpp"

namespace ccs {

// Premises (one per parameter) and conclusion, sharing variables.
struct SchemaRule {
  std::vector<Formula> premises;
  Formula conclusion;

  // All formulas packed into one term, for α-comparison of whole rules.
  Formula as_tuple() const {
    std::vector<Formula> all = premises;
    all.push_back(conclusion);
    return Formula::fun("$rule", std::move(all));
  }
};

inline bool alpha_equivalent(const SchemaRule& a, const SchemaRule& b) {
  return a.premises.size() == b.premises.size() && alpha_equivalent(a.as_tuple(), b.as_tuple());
}

inline std::string to_string(const SchemaRule& r, const std::string& imp = "imp") {
  std::string out;
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    out += i ? ", " : "";
    out += to_string(r.premises[i], imp);
  }
  out += out.empty() ? "|- " : " |- ";
  out += to_string(r.conclusion, imp);
  return out;
}

// Resolution-like reading of a schema.  Each parameter stands for one rigid
// formula shaped by its arity type; combinator and axiom leaves are fresh
// copies.  Returns nullopt when the definition is ill-typed.
inline std::optional<SchemaRule> derive_schema_rule(const SchemaDef& s, const Theory& th) {
  VarSupply vars;
  std::unordered_map<std::string, Formula> param_formula;
  SchemaRule rule;
  for (const auto& p : s.params) {
    Formula f = arity_shape(p.arity, th.implication, vars);
    param_formula.emplace(p.name, f);
    rule.premises.push_back(f);
  }
  std::vector<FormulaPair> eqs;
  auto go = [&](auto&& self, const ProofTerm& d) -> Formula {
    if (d.is_leaf()) {
      if (auto it = param_formula.find(d.id()); it != param_formula.end()) return it->second;
      if (const Axiom* ax = th.axioms.find(d.id())) return fresh_variant(ax->formula, vars);
      if (const CombinatorDef* c = th.combinators.find(d.id())) return fresh_variant(c->type, vars);
      throw UnknownIdentifier("unknown identifier " + d.id() + " in schema " + s.name);
    }
    if (d.is_schema()) throw std::invalid_argument("nested schema instance in " + s.name);
    Formula f = self(self, d.fun());
    Formula a = self(self, d.arg());
    Formula r = vars.fresh_var();
    eqs.emplace_back(f, implication(th.implication, a, r));
    return r;
  };
  Formula concl = go(go, s.definition);
  eqs.emplace_back(concl, arity_shape(s.result_arity, th.implication, vars));
  Unifier u = mgu(eqs);
  if (!u) return std::nullopt;
  for (auto& p : rule.premises) p = u.subst.apply(p);
  rule.conclusion = u.subst.apply(concl);
  return rule;
}

struct CombinatorCheck {
  std::string name;
  bool lambda_type_ok = false;   // stored type ≡α type inferred from the λ-term
  bool bracket_ok = false;       // stored type ≡α MGT of the translation over S, K, I, B, C
  std::optional<bool> alt_ok;    // stored type ≡α MGT of the alternate definition
  ProofTerm translation;
  std::string message;

  bool ok() const { return lambda_type_ok && bracket_ok && alt_ok.value_or(true); }
};

struct CombinatorReport {
  std::vector<CombinatorCheck> rows;
  bool ok() const {
    for (const auto& r : rows)
      if (!r.ok()) return false;
    return true;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& r : rows)
      if (!r.ok()) out.push_back(r.name + ": " + r.message);
    return out;
  }
};

// Checks every row of `combs`.  The basis S, K, I, B, C used for the
// translation check is taken from `combs` itself.
inline CombinatorReport verify_combinator_table(const CombinatorTable& combs) {
  Calculus calc;
  calc.combinators = combs;
  Theory th("imp", {}, calc);
  CombinatorReport report;
  for (const auto& c : combs.entries()) {
    CombinatorCheck row;
    row.name = c.name;
    auto inferred = principal_type(c.lambda, "imp", [&](const std::string& id) -> std::optional<Formula> {
      if (const CombinatorDef* d = combs.find(id)) return d->type;
      return std::nullopt;
    });
    row.lambda_type_ok = inferred && alpha_equivalent(*inferred, c.type);
    if (!row.lambda_type_ok)
      row.message += "λ-term type " + (inferred ? to_string(*inferred) : std::string("undefined")) + "; ";
    try {
      row.translation = lambda_to_cl(c.lambda, BracketOptions{false});
      auto m = mgt(row.translation, th);
      row.bracket_ok = m && alpha_equivalent(*m, c.type);
      if (!row.bracket_ok)
        row.message += "translation " + print_proof_term(row.translation) + " has type " +
                       (m ? to_string(*m) : std::string("undefined")) + "; ";
    } catch (const std::exception& e) {
      row.message += std::string("translation failed: ") + e.what() + "; ";
    }
    if (c.alt) {
      auto m = mgt(*c.alt, th);
      row.alt_ok = m && alpha_equivalent(*m, c.type);
      if (!*row.alt_ok)
        row.message += "alternate " + print_proof_term(*c.alt) + " has type " +
                       (m ? to_string(*m) : std::string("undefined")) + "; ";
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace ccs
