#pragma once

// Expected resolution-like rules of the bundled schemas, written as premise
// shapes, a conclusion and the equations solved by the rule's mgu.

#include <string>
#include <vector>

#include "ccs/calculus.hpp"

namespace ccs::tst {

struct SchemaRow {
  std::string definition;  // config line
  std::vector<std::string> premises;
  std::string conclusion;
  std::vector<std::pair<std::string, std::string>> unify;
};

inline const std::vector<SchemaRow>& f8_schema_rows() {
  static const std::vector<SchemaRow> rows = {
      {"r0(p,q) = p q", {"A => B", "D"}, "B", {{"A", "D"}}},
      {"r1(p,q) = \\x. p (q x)", {"A => B", "C => D"}, "C => B", {{"A", "D"}}},
  };
  return rows;
}

inline const std::vector<SchemaRow>& considered_schema_rows() {
  static const std::vector<SchemaRow> rows = {
      {"I:2 = I", {}, "(A => B) => (A => B)", {}},
      {"r0(p:1,q:0):0 = p q", {"A => B", "D"}, "B", {{"A", "D"}}},
      {"r1(p:2,q:0,r:0):0 = p q r", {"A1 => (A2 => B)", "D1", "D2"}, "B", {{"A1", "D1"}, {"A2", "D2"}}},
      {"r2(p:2,q:0):1 = \\x. p q x", {"A1 => (A2 => B)", "D"}, "A2 => B", {{"A1", "D"}}},
      {"r3(p:2,q:0):1 = \\x. p x q", {"A1 => (A2 => B)", "D"}, "A1 => B", {{"A2", "D"}}},
      {"r4(p:1,q:1):1 = B p q", {"A => B", "C => D"}, "C => B", {{"A", "D"}}},
      {"r5(p:2,q:1):2 = \\x y. p (q x) y", {"A1 => (A2 => B)", "C => D"}, "C => (A2 => B)", {{"A1", "D"}}},
      {"r6(p:2,q:1):2 = B (C p) q", {"A1 => (A2 => B)", "C => D"}, "C => (A1 => B)", {{"A2", "D"}}},
  };
  return rows;
}

inline SchemaRule expected_rule(const SchemaRow& row) {
  FormulaSyntax syn;
  std::vector<FormulaPair> eqs;
  for (const auto& [l, r] : row.unify) eqs.emplace_back(parse_formula(l, syn), parse_formula(r, syn));
  Unifier u = mgu(eqs);
  SchemaRule rule;
  for (const auto& p : row.premises) rule.premises.push_back(u.subst.apply(parse_formula(p, syn)));
  rule.conclusion = u.subst.apply(parse_formula(row.conclusion, syn));
  return rule;
}

struct RowCheck {
  std::string name;
  bool ok = false;
  std::string derived;
  std::string expected;
};

inline std::vector<RowCheck> check_schema_rows(const std::vector<SchemaRow>& rows) {
  std::vector<RowCheck> out;
  for (const auto& row : rows) {
    Calculus calc = parse_config(row.definition, default_calculus());
    Theory th("imp", {}, calc);
    const SchemaDef& s = calc.schemas.entries().front();
    RowCheck c;
    c.name = print_schema_head(s);
    SchemaRule want = expected_rule(row);
    c.expected = to_string(want);
    auto got = derive_schema_rule(s, th);
    c.derived = got ? to_string(*got) : "undefined";
    c.ok = got && alpha_equivalent(*got, want);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ccs::tst
