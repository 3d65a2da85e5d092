#pragma once

// Brute-force cross-check for the prover: builds every proof structure
// bottom-up, level by level in compacted size, without goal direction, lemma
// lists or the term heap.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccs/mgt.hpp"
#include "ccs/search.hpp"
#include "ccs/term.hpp"
#include "ccs/unify.hpp"

namespace ccs {

class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultOracleWork = 20'000'000;

struct OracleResult {
  std::optional<std::size_t> min_size;
  std::size_t count = 0;
  std::vector<ProofTerm> proofs;
  std::size_t items = 0;  // structures with defined MGT that were built
  std::uint64_t work = 0;
};

class Oracle {
 public:
  struct Item {
    ProofTerm term;
    Formula mgt;
    int arity;
    std::vector<std::uint32_t> subs;  // compound items occurring in this one, sorted
  };

  Oracle(const Theory& th, const SearchConfig& cfg, std::uint64_t work_limit = kDefaultOracleWork)
      : th_(th), cfg_(cfg), limit_(work_limit) {
    MgtOptions mo{cfg_.arity_typing};
    std::vector<int> rank;
    auto leaf = [&](const std::string& id, std::optional<Formula> f, int arity, int r) {
      if (!f) throw std::invalid_argument("leaf " + id + " has no defined MGT");
      Item item{ProofTerm::leaf(id), canonical_variables(*f), arity, {}};
      for (std::size_t i = 0; i < items_.size(); ++i)
        if (items_[i].term.id() == id) {
          if (r < rank[i]) items_[i] = std::move(item), rank[i] = r;
          return;
        }
      items_.push_back(std::move(item));
      rank.push_back(r);
    };
    for (const auto& ax : th_.axioms.entries()) leaf(ax.id, ax.formula, ax.arity, 0);
    for (const auto& n : cfg_.schemas) {
      const SchemaDef* s = th_.schemas.find(n);
      if (!s) throw UnknownIdentifier("unknown schema " + n);
      if (s->params.empty()) {
        leaf(n, mgt(ProofTerm::leaf(n), th_, mo), s->result_arity, 1);
      } else {
        schemas_.push_back(s);
      }
    }
    for (const auto& c : cfg_.combinators) {
      const CombinatorDef* d = th_.combinators.find(c);
      if (!d) throw UnknownIdentifier("unknown combinator " + c);
      leaf(c, d->type, kUnknownArity, 2);
    }
    levels_.push_back(items_.size());
  }

  const std::vector<Item>& items() const { return items_; }
  std::uint64_t work() const { return work_; }

  // Indices of items of compacted size k, building levels as needed.
  std::pair<std::size_t, std::size_t> level(std::size_t k) {
    while (levels_.size() <= k) build_next();
    std::size_t begin = k == 0 ? 0 : levels_[k - 1];
    return {begin, levels_[k]};
  }

 private:
  bool compat(int arity, ArityReq r) const { return !cfg_.arity_typing || arity_compatible(arity, r); }

  void charge(std::uint64_t n = 1) {
    work_ += n;
    if (work_ > limit_)
      throw OracleRefused("oracle: work limit of " + std::to_string(limit_) + " exceeded at size " +
                          std::to_string(levels_.size()));
  }

  std::optional<Formula> detach(const Formula& fun, const Formula& arg) {
    Formula f = fresh_variant(fun, vars_);
    Formula a = fresh_variant(arg, vars_);
    Formula y = vars_.fresh_var();
    Unifier u = mgu(f, implication(th_.implication, a, y));
    if (!u) return std::nullopt;
    return canonical_variables(u.subst.apply(y));
  }

  static std::vector<std::uint32_t> merge(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  void add(std::vector<Item>& fresh, ProofTerm t, Formula f, int arity, std::vector<std::uint32_t> subs) {
    subs.push_back(static_cast<std::uint32_t>(items_.size() + fresh.size()));
    fresh.push_back({std::move(t), std::move(f), arity, std::move(subs)});
  }

  void build_next() {
    std::size_t k = levels_.size();
    std::size_t want = k - 1;  // compound subterms below the new root
    std::size_t n = items_.size();
    std::vector<Item> fresh;
    if (cfg_.use_d) {
      for (std::size_t i = 0; i < n; ++i) {
        const Item& f = items_[i];
        if (f.subs.size() > want) continue;
        if (cfg_.arity_typing && f.arity == 0) continue;
        if (!is_implication(f.mgt, th_.implication) && !f.mgt.is_var()) continue;
        for (std::size_t j = 0; j < n; ++j) {
          const Item& a = items_[j];
          if (a.subs.size() > want || f.subs.size() + a.subs.size() < want) continue;
          charge();
          auto u = merge(f.subs, a.subs);
          if (u.size() != want) continue;
          auto m = detach(f.mgt, a.mgt);
          if (!m) continue;
          int arity = (cfg_.arity_typing && f.arity >= 1) ? f.arity - 1 : kUnknownArity;
          add(fresh, ProofTerm::app(f.term, a.term), std::move(*m), arity, std::move(u));
        }
      }
    }
    for (const SchemaDef* s : schemas_) {
      std::vector<std::uint32_t> pick;
      auto go = [&](auto&& self, const std::vector<std::uint32_t>& subs) -> void {
        std::size_t p = pick.size();
        if (p == s->params.size()) {
          if (subs.size() != want) return;
          charge();
          std::vector<Formula> args;
          std::vector<ProofTerm> kids;
          for (auto idx : pick) {
            args.push_back(items_[idx].mgt);
            kids.push_back(items_[idx].term);
          }
          auto m = schema_instance_mgt(*s, args, th_, MgtOptions{cfg_.arity_typing});
          if (!m) return;
          add(fresh, ProofTerm::schema(s->name, std::move(kids)), canonical_variables(*m), s->result_arity, subs);
          return;
        }
        ArityReq req;
        req.exact = s->params[p].arity;
        for (std::size_t i = 0; i < n; ++i) {
          if (!compat(items_[i].arity, req)) continue;
          charge();
          auto u = merge(subs, items_[i].subs);
          if (u.size() > want) continue;
          pick.push_back(static_cast<std::uint32_t>(i));
          self(self, u);
          pick.pop_back();
        }
      };
      go(go, {});
    }
    for (auto& it : fresh) items_.push_back(std::move(it));
    levels_.push_back(items_.size());
  }

  const Theory& th_;
  SearchConfig cfg_;
  std::uint64_t limit_;
  std::uint64_t work_ = 0;
  VarSupply vars_;
  std::vector<const SchemaDef*> schemas_;
  std::vector<Item> items_;
  std::vector<std::size_t> levels_;  // levels_[k] = number of items of size <= k
};

// Minimal compacted size of a proof of `goal` over the configured
// constructors, and the number of distinct structures of that size.
// Throws OracleRefused past the work limit.
inline OracleResult oracle_min_size(const Theory& th, const Formula& goal, int goal_arity, const SearchConfig& cfg,
                                    std::uint64_t work_limit = kDefaultOracleWork) {
  Oracle o(th, cfg, work_limit);
  OracleResult r;
  ArityReq root;
  root.exact = goal_arity;
  for (std::size_t k = cfg.min_size; k <= cfg.max_size; ++k) {
    auto [b, e] = o.level(k);
    for (std::size_t i = b; i < e; ++i) {
      const auto& it = o.items()[i];
      if ((!cfg.arity_typing || arity_compatible(it.arity, root)) && subsumes(it.mgt, goal)) {
        ++r.count;
        r.proofs.push_back(it.term);
      }
    }
    if (r.count > 0) {
      r.min_size = k;
      break;
    }
  }
  r.items = o.items().size();
  r.work = o.work();
  return r;
}

}  // namespace ccs
