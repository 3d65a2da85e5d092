#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace ccs;
using tst::fn_pure_proof;

namespace {

// Pure proof of f^(2^n): the chain 2 (2 (... 1)) of length 2^n.
ProofTerm power_proof(std::size_t n) { return fn_pure_proof(std::size_t{1} << n); }

}  // namespace

TEST(Compression, PowersOfTwoStayLinearInN) {
  for (std::size_t n = 2; n <= 4; ++n) {
    ProofTerm pure = power_proof(n);
    CompressionReport rep = compress_proof(pure, builtin_combinators());
    EXPECT_EQ(expand(rep.grammar), pure) << n;
    EXPECT_LE(rep.metrics.lc, 2 * n) << n;
    EXPECT_EQ(rep.metrics.xc, std::size_t{1} << n);
    NormalizeResult nf = normalize(rep.cl, builtin_combinators());
    EXPECT_TRUE(nf.pure);
    EXPECT_EQ(nf.term, pure) << n;
  }
}

TEST(Compression, EightFromThreeSquarings) {
  CompressionReport rep = compress_proof(power_proof(3), builtin_combinators());
  EXPECT_EQ(print_factor_list(to_factor_list(rep.cl, LabelPolicy::numeric(2))), "[3 = B 2 2, 4 = B 3 3, 5 = 4 (4 1)]");
  EXPECT_EQ(rep.metrics.gs, 8u);
  EXPECT_EQ(rep.metrics.lc, 6u);
}

TEST(Compression, GrammarNeverExceedsSharedDag) {
  ProofTerm t = parse_proof_term("1 1 (1 (1 1) (1 (1 1)))");
  LinearTreeGrammar g = compress_grammar(t);
  EXPECT_EQ(expand(g), t);
  EXPECT_LE(grammar_size(g), 2 * compacted_size(t));
}

TEST(Compression, RandomTermsAreLossless) {
  std::mt19937_64 rng(5);
  auto random_term = [&](auto&& self, int depth) -> ProofTerm {
    int r = std::uniform_int_distribution<int>(0, 9)(rng);
    if (depth == 0 || r < 2) return ProofTerm::leaf(r % 2 ? "1" : "2");
    if (r < 5) return ProofTerm::app(ProofTerm::leaf("2"), self(self, depth - 1));
    return ProofTerm::app(self(self, depth - 1), self(self, depth - 1));
  };
  for (int i = 0; i < 300; ++i) {
    ProofTerm t = random_term(random_term, 7);
    LinearTreeGrammar g = compress_grammar(t);
    ASSERT_EQ(expand(g), t) << print_proof_term(t);
    EXPECT_LE(grammar_size(g), 2 * compacted_size(t));
    EXPECT_LE(max_rank(g), 4u);
    LinearTreeGrammar back = parse_grammar(print_grammar(g));
    EXPECT_EQ(expand(back), t);
    ProofTerm cl = grammar_to_cl(g);
    EXPECT_EQ(normalize(cl, builtin_combinators()).term, t) << print_proof_term(t);
  }
}

TEST(Grammar, ParseAndExpand) {
  LinearTreeGrammar g = parse_grammar("N1(y) = 2 y\nstart = N1(N1(1))\n");
  EXPECT_EQ(expand(g), parse_proof_term("2 (2 1)"));
  EXPECT_EQ(grammar_size(g), 4u);
  EXPECT_EQ(max_rank(g), 1u);
}

TEST(Grammar, Errors) {
  auto kind_of = [](const std::string& text) {
    try {
      parse_grammar(text);
    } catch (const GrammarError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  EXPECT_EQ(kind_of("N1(y) = 2 y\nN1(y) = 1 y\nstart = N1(1)"),
            static_cast<int>(GrammarError::Kind::DuplicateNonterminal));
  EXPECT_EQ(kind_of("N1(y) = y y\nstart = N1(1)"), static_cast<int>(GrammarError::Kind::NonLinear));
  EXPECT_EQ(kind_of("N1(y) = N2(y)\nN2(y) = N1(y)\nstart = N1(1)"), static_cast<int>(GrammarError::Kind::Cycle));
  EXPECT_EQ(kind_of("N1(y) = 2 y"), static_cast<int>(GrammarError::Kind::MissingStart));
  try {
    parse_grammar("N1(y) = 2 y\nN1(y) = 1 y\nstart = N1(1)");
  } catch (const GrammarError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Metrics, LcTreatsPureSubtermsAsConstants) {
  auto is_comb = combinator_predicate(builtin_combinators());
  // B B counts as one constant: [B B] (2 1) 1 has three applications.
  EXPECT_EQ(lc_size(parse_proof_term("B B (2 1) 1"), is_comb), 3u);
  EXPECT_EQ(lc_size(parse_proof_term("2 (2 1)"), is_comb), 2u);
  EXPECT_EQ(lc_size(parse_proof_term("B B (B B) 1"), is_comb), 1u);
  auto pure = maximal_pure_terms(parse_proof_term("B B (2 (C B)) (B B)"), is_comb);
  ASSERT_EQ(pure.size(), 2u);
  EXPECT_EQ(print_proof_term(pure[0]), "B B");
  EXPECT_EQ(print_proof_term(pure[1]), "C B");
}

TEST(Metrics, Ratios) {
  CompressionReport rep = compress_proof(power_proof(4), builtin_combinators(), 16);
  EXPECT_EQ(rep.metrics.mc, 16u);
  EXPECT_DOUBLE_EQ(rep.metrics.xc_over_lc(), 16.0 / static_cast<double>(rep.metrics.lc));
  EXPECT_DOUBLE_EQ(rep.metrics.xc2_over_gs(), 32.0 / static_cast<double>(rep.metrics.gs));
  EXPECT_EQ(alternate_name(parse_proof_term("C B"), builtin_combinators()), "B'");
}
