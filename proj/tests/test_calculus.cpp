#include <gtest/gtest.h>

#include <random>

#include "schema_rows.hpp"
#include "test_support.hpp"

using namespace ccs;
using tst::fn_goal;
using tst::fn_pure_proof;
using tst::fn_theory;

TEST(Combinators, TableHasTwelveVerifiedRows) {
  const CombinatorTable& combs = builtin_combinators();
  EXPECT_EQ(combs.size(), 12u);
  CombinatorReport rep = verify_combinator_table(combs);
  for (const auto& f : rep.failures()) ADD_FAILURE() << f;
  EXPECT_TRUE(rep.ok());
}

TEST(Combinators, AlternateDefinitions) {
  Theory th("imp", {}, default_calculus());
  for (auto [alt, name] : {std::pair{"C I", "I'"}, {"C B", "B'"}, {"C C", "C*"}, {"B B", "B''"}}) {
    auto m = mgt(parse_proof_term(alt), th);
    ASSERT_TRUE(m) << alt;
    EXPECT_TRUE(alpha_equivalent(*m, builtin_combinators().find(name)->type)) << alt;
  }
  EXPECT_TRUE(alpha_equivalent(*mgt(ProofTerm::leaf("I"), th), parse_formula("p => p")));
}

TEST(Combinators, DuplicatingFlag) {
  const CombinatorTable& combs = builtin_combinators();
  EXPECT_TRUE(combs.find("S")->duplicating());
  EXPECT_TRUE(combs.find("S4")->duplicating());
  EXPECT_FALSE(combs.find("B")->duplicating());
  EXPECT_FALSE(combs.find("C*")->duplicating());
}

TEST(Combinators, DataFileMirrorsBuiltinTable) {
  Calculus c = load_config(tst::data_path("combinators.cfg"));
  ASSERT_EQ(c.combinators.size(), builtin_combinators().size());
  for (const auto& d : builtin_combinators().entries()) {
    const CombinatorDef* e = c.combinators.find(d.name);
    ASSERT_NE(e, nullptr) << d.name;
    EXPECT_EQ(e->body, d.body) << d.name;
    EXPECT_TRUE(alpha_equivalent(e->type, d.type)) << d.name;
  }
}

TEST(Combinators, ConfigErrors) {
  EXPECT_THROW(parse_config("combinator B \\x. x"), ConfigError);
  EXPECT_THROW(parse_config("r(p,p) = p p"), ConfigError);
  EXPECT_THROW(parse_config("r(p,q) = p 1"), ConfigError);
}

TEST(Normalize, B_Compression) {
  NormalizeResult nf = normalize(parse_proof_term("B (B 2 2) (B 2 2) (B (B 2 2) (B 2 2) 1)"), builtin_combinators());
  EXPECT_TRUE(nf.pure);
  EXPECT_EQ(nf.term, fn_pure_proof(8));
}

TEST(Normalize, AllB_ProofsOfF8ReduceToOneD_Term) {
  for (const auto& s : tst::f8_b_proofs()) {
    NormalizeResult nf = normalize(parse_proof(s), builtin_combinators());
    EXPECT_TRUE(nf.pure) << s;
    EXPECT_EQ(nf.term, fn_pure_proof(8)) << s;
  }
}

TEST(Normalize, PureTermIsFixed) {
  ProofTerm t = parse_proof_term("2 (2 1) (1 1)");
  EXPECT_EQ(normalize(t, builtin_combinators()).term, t);
}

TEST(Normalize, UnderAppliedCombinatorIsReported) {
  NormalizeResult nf = normalize(parse_proof_term("B 2 2"), builtin_combinators());
  EXPECT_FALSE(nf.pure);
}

TEST(Normalize, BudgetBoundsDuplicatingRules) {
  // S I I (S I I) has no normal form.
  EXPECT_THROW(normalize(parse_proof_term("S I I (S I I)"), builtin_combinators(), 1000), BudgetExceeded);
}

TEST(Normalize, RandomRedexOrderGivesSameNormalForm) {
  // Contract one random redex at a time with the builtin rules and compare
  // with the deterministic leftmost-outermost normalizer.
  std::mt19937_64 rng(3);
  const CombinatorTable& combs = builtin_combinators();
  std::vector<std::string> names = {"B", "C", "I", "K", "B'", "C*", "B4", "C4", "I'", "B''"};
  auto random_term = [&](auto&& self, int depth) -> ProofTerm {
    std::uniform_int_distribution<int> d(0, 9);
    int r = d(rng);
    if (depth == 0 || r < 4) {
      if (r % 2) return ProofTerm::leaf(names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)]);
      return ProofTerm::leaf(std::to_string(1 + r % 3));
    }
    return ProofTerm::app(self(self, depth - 1), self(self, depth - 1));
  };
  auto contract_random = [&](const ProofTerm& t) -> std::optional<ProofTerm> {
    std::vector<ProofTerm> redexes;
    auto collect = [&](auto&& self, const ProofTerm& u) -> void {
      std::vector<ProofTerm> args;
      const ProofTerm* h = &u;
      while (h->is_app()) {
        args.push_back(h->arg());
        h = &h->fun();
      }
      if (h->is_leaf()) {
        const CombinatorDef* c = combs.find(h->id());
        if (c && args.size() >= c->arity()) redexes.push_back(u);
      }
      if (u.is_app()) {
        self(self, u.fun());
        self(self, u.arg());
      }
    };
    collect(collect, t);
    if (redexes.empty()) return std::nullopt;
    ProofTerm pick = redexes[std::uniform_int_distribution<std::size_t>(0, redexes.size() - 1)(rng)];
    // Contract `pick` at its head: peel exactly arity arguments.
    std::vector<ProofTerm> args;
    ProofTerm h = pick;
    while (h.is_app()) {
      args.push_back(h.arg());
      h = h.fun();
    }
    std::reverse(args.begin(), args.end());
    const CombinatorDef* c = combs.find(h.id());
    std::unordered_map<std::string, ProofTerm> bind;
    for (std::size_t i = 0; i < c->arity(); ++i) bind.emplace(c->params[i], args[i]);
    ProofTerm r = detail::substitute_leaves(c->body, bind);
    for (std::size_t i = c->arity(); i < args.size(); ++i) r = ProofTerm::app(r, args[i]);
    bool done = false;
    auto replace = [&](auto&& self, const ProofTerm& u) -> ProofTerm {
      if (!done && u.identity() == pick.identity()) {
        done = true;
        return r;
      }
      if (!u.is_app()) return u;
      ProofTerm f = self(self, u.fun());
      ProofTerm a = self(self, u.arg());
      return ProofTerm::app(f, a);
    };
    return replace(replace, t);
  };
  int compared = 0;
  for (int i = 0; i < 300; ++i) {
    ProofTerm t = random_term(random_term, 4);
    NormalizeResult nf;
    try {
      nf = normalize(t, combs, 20'000);
    } catch (const BudgetExceeded&) {
      continue;
    }
    ProofTerm u = t;
    int steps = 0;
    while (auto next = contract_random(u)) {
      u = *next;
      if (++steps > 20'000) break;
    }
    if (steps > 20'000) continue;
    EXPECT_EQ(u, nf.term) << print_proof_term(t);
    ++compared;
  }
  EXPECT_GT(compared, 200);
}

TEST(Lambda, BracketAbstractionExamples) {
  EXPECT_EQ(print_proof_term(lambda_to_cl(parse_lambda("\\x. p (q x)"))), "B p q");
  EXPECT_EQ(print_proof_term(lambda_to_cl(parse_lambda("\\x. x"))), "I");
  EXPECT_EQ(print_proof_term(lambda_to_cl(parse_lambda("\\x y. p y (q x)"))), "B (C p) q");
  EXPECT_EQ(print_proof_term(lambda_to_cl(parse_lambda("\\x y. p (q x) y"))), "B p q");
}

TEST(Lambda, TranslationsReduceBackToTheirBodies) {
  for (const auto& c : builtin_combinators().entries()) {
    ProofTerm t = lambda_to_cl(c.lambda, BracketOptions{false});
    for (const auto& p : c.params) t = ProofTerm::app(t, ProofTerm::leaf("v_" + p));
    std::unordered_map<std::string, ProofTerm> ren;
    for (const auto& p : c.params) ren.emplace(p, ProofTerm::leaf("v_" + p));
    NormalizeResult nf = normalize(t, builtin_combinators());
    EXPECT_EQ(nf.term, detail::substitute_leaves(c.body, ren)) << c.name;
  }
}

TEST(Schemas, ExpansionRewritesEachFactor) {
  SchemaTable schemas = tst::f8_schema_calculus().schemas;
  FactorList a = expand_schemas(parse_factor_list(tst::f8_schema_proofs()[0]), schemas);
  EXPECT_EQ(print_factor_list(a), "[3 = B 2 2, 4 = B 3 3, 5 = 4 (4 1)]");
  FactorList b = expand_schemas(parse_factor_list(tst::f8_schema_proofs()[1]), schemas);
  EXPECT_EQ(print_factor_list(b), "[3 = B 2 2, 4 = B 3 3, 5 = B 4 4 1]");
  EXPECT_EQ(expand_schemas(parse_proof_term("r0(2, 1)"), schemas), parse_proof_term("2 1"));
  EXPECT_EQ(expand_schemas(parse_proof_term("2 1"), schemas), parse_proof_term("2 1"));
  EXPECT_THROW(expand_schemas(parse_proof_term("r9(2, 1)"), schemas), UnknownIdentifier);
}

TEST(Schemas, TreeAndFactorExpansionAgree) {
  SchemaTable schemas = tst::f8_schema_calculus().schemas;
  for (const auto& s : tst::f8_schema_proofs()) {
    FactorList fl = parse_factor_list(s);
    ProofTerm tree = normalize(expand_schemas(from_factor_list(fl), schemas), builtin_combinators()).term;
    ProofTerm per_factor =
        normalize(from_factor_list(expand_schemas(fl, schemas)), builtin_combinators()).term;
    EXPECT_EQ(tree, per_factor);
    EXPECT_EQ(tree, fn_pure_proof(8));
    std::size_t bound = compacted_size(from_factor_list(fl)) + fl.factors.size() * 3;
    EXPECT_LE(compacted_size(from_factor_list(expand_schemas(fl, schemas))), bound);
  }
}

TEST(Schemas, Simplification) {
  Calculus calc = load_config(tst::data_path("schemas/all.cfg"), default_calculus());
  EXPECT_EQ(simplify(parse_proof_term("r1(I, 2, 1)"), calc.schemas), parse_proof_term("2 1"));
  EXPECT_EQ(simplify(parse_proof_term("I 2"), calc.schemas), parse_proof_term("2"));
  EXPECT_EQ(simplify(parse_proof_term("r0(2, 1)"), calc.schemas), parse_proof_term("2 1"));
  EXPECT_EQ(simplify(parse_proof_term("r2(2, 1)"), calc.schemas), parse_proof_term("2 1"));
  EXPECT_EQ(simplify(parse_proof_term("r4(2, 2)"), calc.schemas), parse_proof_term("r4(2, 2)"));
}

TEST(Schemas, RulesOfBothTables) {
  for (const auto* rows : {&tst::f8_schema_rows(), &tst::considered_schema_rows()})
    for (const auto& c : tst::check_schema_rows(*rows))
      EXPECT_TRUE(c.ok) << c.name << ": derived " << c.derived << ", expected " << c.expected;
}

TEST(Mgt, FnAxioms) {
  Theory th = fn_theory();
  EXPECT_EQ(to_string(*mgt(parse_proof_term("D(2,1)"), th)), "P(f(a))");
  EXPECT_TRUE(proves(fn_pure_proof(8), fn_goal(8), th));
  EXPECT_FALSE(proves(fn_pure_proof(7), fn_goal(8), th));
  EXPECT_FALSE(mgt(parse_proof_term("1 1"), th));
  EXPECT_THROW(mgt(parse_proof_term("9 1"), th), UnknownIdentifier);
}

TEST(Mgt, SharedSubtermsAreFreshVariants) {
  AxiomTable ax;
  ax.add({"1", parse_formula("x => (y => x)"), kUnknownArity});
  Theory th("imp", ax, default_calculus());
  ProofTerm t = parse_proof_term("1 1 (1 1)");
  auto a = mgt(t, th);
  auto b = mgt_by_constraints(t, th);
  ASSERT_TRUE(a && b);
  EXPECT_TRUE(alpha_equivalent(*a, *b));
}

TEST(Mgt, AgreesWithConstraintSolverOnRandomTerms) {
  AxiomTable ax;
  ax.add({"1", parse_formula("x => (y => x)"), kUnknownArity});
  ax.add({"2", parse_formula("(x => (y => z)) => ((x => y) => (x => z))"), kUnknownArity});
  Theory th("imp", ax, default_calculus());
  std::mt19937_64 rng(11);
  auto random_term = [&](auto&& self, int depth) -> ProofTerm {
    int r = std::uniform_int_distribution<int>(0, 5)(rng);
    if (depth == 0 || r < 2) {
      static const char* leaves[] = {"1", "2", "B", "C", "I"};
      return ProofTerm::leaf(leaves[std::uniform_int_distribution<int>(0, 4)(rng)]);
    }
    return ProofTerm::app(self(self, depth - 1), self(self, depth - 1));
  };
  int defined = 0;
  for (int i = 0; i < 2000; ++i) {
    ProofTerm t = random_term(random_term, 4);
    auto a = mgt(t, th);
    auto b = mgt_by_constraints(t, th);
    ASSERT_EQ(a.has_value(), b.has_value()) << print_proof_term(t);
    if (a) {
      ++defined;
      EXPECT_TRUE(alpha_equivalent(*a, *b)) << print_proof_term(t);
    }
  }
  EXPECT_GT(defined, 100);
}

TEST(Mgt, SchemaInstancesUseTheirDefinition) {
  Theory th = fn_theory(tst::f8_schema_calculus());
  auto m = mgt(parse_proof_term("r0(r1(2, 2), 1)"), th);
  ASSERT_TRUE(m);
  EXPECT_EQ(to_string(*m), "P(f(f(a)))");
}
