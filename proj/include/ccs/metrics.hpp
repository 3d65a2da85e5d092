#pragma once

// Size measures for compressed proofs.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccs/grammar.hpp"
#include "ccs/rewrite.hpp"
#include "ccs/tables.hpp"
#include "ccs/term.hpp"

namespace ccs {

using CombinatorPredicate = std::function<bool(const std::string&)>;

inline CombinatorPredicate combinator_predicate(const CombinatorTable& combs) {
  return [&combs](const std::string& id) { return combs.contains(id); };
}

namespace detail {

// For every node (by identity): whether all its leaves are combinators.
class PurityMap {
 public:
  PurityMap(const ProofTerm& t, const CombinatorPredicate& is_comb) : is_comb_(is_comb) { visit(t); }
  bool pure(const ProofTerm& t) const { return memo_.at(t.identity()).first; }

 private:
  bool visit(const ProofTerm& t) {
    if (auto it = memo_.find(t.identity()); it != memo_.end()) return it->second.first;
    bool p = true;
    if (t.is_leaf()) {
      p = is_comb_(t.id());
    } else {
      for (const auto& c : t.children()) p = visit(c) && p;
    }
    memo_.emplace(t.identity(), std::make_pair(p, t));
    return p;
  }
  const CombinatorPredicate& is_comb_;
  std::unordered_map<const void*, std::pair<bool, ProofTerm>> memo_;
};

}  // namespace detail

// Compound pure CL-subterms that do not occur inside a larger pure one, each
// listed once, left to right.
inline std::vector<ProofTerm> maximal_pure_terms(const ProofTerm& t, const CombinatorPredicate& is_comb) {
  detail::PurityMap purity(t, is_comb);
  std::vector<ProofTerm> out;
  std::unordered_set<std::string> listed;
  std::unordered_set<const void*> seen;
  auto go = [&](auto&& self, const ProofTerm& u) -> void {
    if (u.is_leaf() || !seen.insert(u.identity()).second) return;
    if (purity.pure(u)) {
      if (listed.insert(print_proof_term(u)).second) out.push_back(u);
      return;
    }
    for (const auto& c : u.children()) self(self, c);
  };
  go(go, t);
  return out;
}

// Compacted size with every maximal pure CL-subterm valued as a constant.
inline std::size_t lc_size(const ProofTerm& t, const CombinatorPredicate& is_comb) {
  detail::PurityMap purity(t, is_comb);
  std::unordered_map<const void*, std::pair<ProofTerm, ProofTerm>> memo;
  auto go = [&](auto&& self, const ProofTerm& u) -> ProofTerm {
    if (auto it = memo.find(u.identity()); it != memo.end()) return it->second.second;
    ProofTerm r = u;
    if (!u.is_leaf()) {
      if (purity.pure(u)) {
        r = ProofTerm::leaf("[" + print_proof_term(u) + "]");
      } else if (u.is_app()) {
        r = ProofTerm::app(self(self, u.fun()), self(self, u.arg()));
      } else {
        std::vector<ProofTerm> args;
        for (const auto& c : u.children()) args.push_back(self(self, c));
        r = ProofTerm::schema(u.id(), std::move(args));
      }
    }
    memo.emplace(u.identity(), std::make_pair(u, r));
    return r;
  };
  return compacted_size(go(go, t));
}

// Name of the combinator whose alternate definition is `t`, if any.
inline std::optional<std::string> alternate_name(const ProofTerm& t, const CombinatorTable& combs) {
  for (const auto& c : combs.entries())
    if (c.alt && *c.alt == t) return c.name;
  return std::nullopt;
}

struct CompressionMetrics {
  std::size_t xc = 0;                // compacted size of the pure proof
  std::size_t gs = 0;                // grammar size
  std::size_t lc = 0;                // compacted size of the CL-term, pure CL-subterms as constants
  std::optional<std::size_t> sc;     // compacted size of a PS-term proof
  std::optional<std::size_t> mc;     // known minimal pure compacted size
  std::size_t max_rank = 0;          // most parameters of any production
  std::vector<std::string> pure_terms;

  double xc_over_lc() const { return lc ? static_cast<double>(xc) / static_cast<double>(lc) : 0.0; }
  double xc2_over_gs() const { return gs ? 2.0 * static_cast<double>(xc) / static_cast<double>(gs) : 0.0; }
};

// Throws std::invalid_argument unless `cl` normalizes to `source`.
inline CompressionMetrics compute_metrics(const ProofTerm& source, const ProofTerm& cl, const LinearTreeGrammar& g,
                                          const CombinatorTable& combs, std::optional<std::size_t> mc = std::nullopt,
                                          std::size_t step_budget = kDefaultStepBudget) {
  NormalizeResult nf = normalize(cl, combs, step_budget);
  if (!nf.pure || !(nf.term == source))
    throw std::invalid_argument("compute_metrics: CL-term does not normalize to the source proof");
  CompressionMetrics m;
  m.xc = compacted_size(source);
  m.gs = grammar_size(g);
  auto is_comb = combinator_predicate(combs);
  m.lc = lc_size(cl, is_comb);
  m.mc = mc;
  m.max_rank = max_rank(g);
  for (const auto& p : maximal_pure_terms(cl, is_comb)) {
    std::string s = print_proof_term(p);
    if (auto alias = alternate_name(p, combs)) s += " (" + *alias + ")";
    m.pure_terms.push_back(std::move(s));
  }
  return m;
}

struct CompressionReport {
  LinearTreeGrammar grammar;
  ProofTerm cl;
  CompressionMetrics metrics;
};

// Full pipeline for a pure D-term.
inline CompressionReport compress_proof(const ProofTerm& pure, const CombinatorTable& combs,
                                        std::optional<std::size_t> mc = std::nullopt) {
  CompressionReport r;
  r.grammar = compress_grammar(pure);
  r.cl = grammar_to_cl(r.grammar);
  r.metrics = compute_metrics(pure, r.cl, r.grammar, combs, mc);
  return r;
}

}  // namespace ccs
