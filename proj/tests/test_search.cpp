#include <gtest/gtest.h>

#include "random_problems.hpp"
#include "test_support.hpp"

using namespace ccs;
using tst::fn_goal;
using tst::fn_pure_proof;
using tst::fn_theory;

namespace {

SearchConfig plain(std::size_t bound = 12) {
  SearchConfig c;
  c.max_size = bound;
  return c;
}

SearchConfig with_b() {
  SearchConfig c = plain();
  c.combinators = {"B"};
  c.count_all = true;
  return c;
}

SearchConfig f8_schemas() {
  SearchConfig c = plain();
  c.use_d = false;
  c.schemas = {"r0", "r1"};
  c.arity_typing = true;
  c.count_all = true;
  return c;
}

}  // namespace

TEST(Search, PlainDetachmentOnF8) {
  SearchConfig cfg = plain();
  cfg.count_all = true;
  SearchResult r = prove(fn_theory(), fn_goal(8), 0, cfg);
  ASSERT_EQ(r.min_size, 8u);
  EXPECT_EQ(r.proof_count, 1u);
  ASSERT_EQ(r.proofs.size(), 1u);
  EXPECT_EQ(r.proofs[0].term, fn_pure_proof(8));
}

TEST(Search, FirstProofStopsEarly) {
  SearchResult r = prove(fn_theory(), fn_goal(8), 0, plain());
  ASSERT_EQ(r.proofs.size(), 1u);
  EXPECT_EQ(r.min_size, 8u);
}

TEST(Search, WithB_AllMinimalProofsOfF8) {
  SearchResult r = prove(fn_theory(), fn_goal(8), 0, with_b());
  ASSERT_EQ(r.min_size, 6u);
  EXPECT_EQ(r.proof_count, 6u);
  std::set<std::string> want(tst::f8_b_proofs().begin(), tst::f8_b_proofs().end());
  EXPECT_EQ(tst::printed_factor_lists(r.proofs), want);
  for (const auto& p : r.proofs) EXPECT_TRUE(proves(p.term, fn_goal(8), fn_theory()));
}

TEST(Search, SchemasWithTypingOnF8) {
  Theory th = fn_theory(tst::f8_schema_calculus());
  SearchResult r = prove(th, fn_goal(8), 0, f8_schemas());
  ASSERT_EQ(r.min_size, 4u);
  EXPECT_EQ(r.proof_count, 2u);
  std::set<std::string> want(tst::f8_schema_proofs().begin(), tst::f8_schema_proofs().end());
  EXPECT_EQ(tst::printed_factor_lists(r.proofs), want);
}

TEST(Search, TypingOnlyRemovesProofs) {
  Theory th = fn_theory(tst::f8_schema_calculus());
  SearchConfig typed = f8_schemas();
  typed.max_size = 5;
  typed.min_size = 5;
  SearchConfig untyped = typed;
  untyped.arity_typing = false;
  SearchResult a = prove(th, fn_goal(8), 0, typed);
  SearchResult b = prove(th, fn_goal(8), 0, untyped);
  std::set<std::string> ta = tst::printed_factor_lists(a.proofs);
  std::set<std::string> tb = tst::printed_factor_lists(b.proofs);
  EXPECT_LE(ta.size(), tb.size());
  for (const auto& s : ta) EXPECT_TRUE(tb.count(s)) << s;
}

TEST(Search, LowerBoundWhenExhausted) {
  SearchResult r = prove(fn_theory(), fn_goal(8), 0, plain(7));
  EXPECT_TRUE(r.proofs.empty());
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.lower_bound, 8u);
}

TEST(Search, F16WithB_ContainsSquaringWitness) {
  SearchConfig cfg = with_b();
  cfg.max_size = 8;
  SearchResult r = prove(fn_theory(), fn_goal(16), 0, cfg);
  ASSERT_EQ(r.min_size, 8u);
  EXPECT_TRUE(tst::printed_factor_lists(r.proofs).count("[3 = B 2 2, 4 = B 3 3, 5 = B 4 4, 6 = 5 (5 1)]"));
}

TEST(Search, Lemmas) {
  SearchConfig cfg = plain(3);
  SearchResult r = enumerate_lemmas(fn_theory(), cfg);
  // Distinct structures up to size 3 with a defined MGT: 1, 2, and the
  // chains 2 1, 2 (2 1), 2 (2 (2 1)); 1 1 and 2 2 never detach.
  std::set<std::string> got;
  for (const auto& p : r.proofs) got.insert(to_string(p.mgt));
  EXPECT_TRUE(got.count("P(f(a))"));
  EXPECT_TRUE(got.count("P(f(f(f(a))))"));
  for (const auto& p : r.proofs) EXPECT_LE(p.size, 3u);
}

TEST(Search, ConfigurationErrors) {
  SearchConfig cfg = plain();
  cfg.combinators = {"Q"};
  EXPECT_THROW(prove(fn_theory(), fn_goal(2), 0, cfg), UnknownIdentifier);
  cfg.combinators.clear();
  cfg.schemas = {"zz"};
  EXPECT_THROW(prove(fn_theory(), fn_goal(2), 0, cfg), UnknownIdentifier);
  Theory th = fn_theory(parse_config("dup(p:1,q:0):0 = p (p q)", default_calculus()));
  cfg.schemas = {"dup"};
  EXPECT_THROW(prove(th, fn_goal(2), 0, cfg), std::invalid_argument);
}

TEST(Search, Timeout) {
  SearchConfig cfg = plain(40);
  cfg.combinators = {"S", "K", "I", "B", "C"};
  cfg.timeout_seconds = 0.2;
  // P(g(a)) is not derivable, so the search runs until stopped.
  SearchResult r = prove(fn_theory(), parse_formula("P(g(a))"), 0, cfg);
  EXPECT_TRUE(r.timed_out);
  EXPECT_TRUE(r.proofs.empty());
  EXPECT_LT(r.seconds, 5.0);
}

TEST(Oracle, AgreesOnF8) {
  SearchConfig cfg = with_b();
  cfg.max_size = 6;
  OracleResult o = oracle_min_size(fn_theory(), fn_goal(8), 0, cfg);
  EXPECT_EQ(o.min_size, 6u);
  EXPECT_EQ(o.count, 6u);
}

TEST(Oracle, UnprovableGoal) {
  OracleResult o = oracle_min_size(fn_theory(), parse_formula("P(g(a))"), 0, plain(6));
  EXPECT_FALSE(o.min_size);
  EXPECT_EQ(o.count, 0u);
}

TEST(Oracle, RandomAgreement) {
  tst::ProblemGenerator gen(1);
  constexpr std::uint64_t kWork = 2'000'000;
  int compared = 0;
  int refused = 0;
  for (int i = 0; compared < 200 && i < 2000; ++i) {
    tst::RandomProblem p = gen.next();
    gen.choose_goal(p, kWork);
    OracleResult o;
    try {
      o = oracle_min_size(p.theory, p.goal, p.goal_arity, p.config, kWork);
    } catch (const OracleRefused&) {
      ++refused;
      continue;
    }
    SearchConfig cfg = p.config;
    cfg.count_all = true;
    SearchResult r = prove(p.theory, p.goal, p.goal_arity, cfg);
    ++compared;
    ASSERT_EQ(r.min_size, o.min_size) << p.description;
    if (o.min_size) {
      EXPECT_EQ(r.proof_count, o.count) << p.description;
      for (const auto& q : r.proofs)
        EXPECT_TRUE(tst::independently_proves(q.term, p.goal, p.theory)) << p.description;
    }
  }
  EXPECT_GE(compared, 200) << refused << " refused";
}
