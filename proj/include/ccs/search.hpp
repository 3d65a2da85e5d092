#pragma once

// Goal-driven enumeration of proof DAGs by iterative deepening on compacted
// size.
//
// At bound s the prover solves subgoals from an agenda.  A subgoal is solved
// by a leaf constructor, by reusing an already completed subproof (a fresh copy
// of its most general theorem), or by opening a new factor whose premises
// become subgoals.  A completed factor that equals a listed one is discarded,
// so each DAG arises from exactly one sequence of choices, and a solution is
// accepted only when the list holds exactly s factors.

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccs/calculus.hpp"
#include "ccs/engine.hpp"
#include "ccs/mgt.hpp"
#include "ccs/term.hpp"

namespace ccs {

enum class SearchOrder { AxiomsFirst, AppFirst };

struct SearchConfig {
  bool use_d = true;                    // plain application
  std::vector<std::string> combinators; // combinator leaves
  std::vector<std::string> schemas;     // parameterless ones act as leaves
  bool arity_typing = false;
  std::size_t min_size = 0;
  std::size_t max_size = 12;
  bool count_all = false;
  std::optional<double> timeout_seconds;
  SearchOrder order = SearchOrder::AxiomsFirst;
};

struct FoundProof {
  ProofTerm term;
  Formula mgt;
  std::size_t size = 0;
};

struct SearchResult {
  std::vector<FoundProof> proofs;
  std::optional<std::size_t> min_size;
  std::size_t lower_bound = 0;  // every proof has at least this size
  std::size_t proof_count = 0;
  bool exhausted = false;       // the size bound was reached without reaching a goal proof
  bool timed_out = false;
  std::uint64_t nodes = 0;
  double seconds = 0;
};

struct SearchObserver {
  std::function<void(const std::string&)> progress;
  std::function<void(const FoundProof&)> proof;
};

// Arity requirement at a subgoal position.
struct ArityReq {
  int exact = kUnknownArity;
  int min = 0;
};

inline bool arity_compatible(int arity, ArityReq r) {
  if (arity == kUnknownArity) return true;
  return r.exact >= 0 ? arity == r.exact : arity >= r.min;
}

inline Formula freeze_variables(const Formula& f) {
  if (f.is_var()) return Formula::fun("$" + f.name());
  std::vector<Formula> args;
  for (const auto& a : f.args()) args.push_back(freeze_variables(a));
  return Formula::fun(f.name(), std::move(args));
}

class Prover {
 public:
  // `goal` absent enumerates lemmas: every structure up to the bound whose
  // MGT is defined.
  Prover(const Theory& th, std::optional<Formula> goal, int goal_arity, SearchConfig cfg)
      : th_(th), goal_(std::move(goal)), goal_arity_(goal_arity), cfg_(std::move(cfg)), heap_(syms_) {
    imp_sym_ = syms_.intern(th_.implication, 2);
    // Goal variables act as constants: unifying with the frozen goal is subsumption.
    if (goal_) frozen_goal_ = freeze_variables(*goal_);
    MgtOptions mo{cfg_.arity_typing};
    // A name bound twice resolves like mgt(): axiom, then schema, then combinator.
    auto add_leaf = [&](const std::string& name, const Formula& f, int arity, int rank) {
      for (auto& l : leaves_)
        if (l.name == name) {
          if (rank < l.rank) l = {name, engine::make_template(f, syms_), arity, rank};
          return;
        }
      leaves_.push_back({name, engine::make_template(f, syms_), arity, rank});
    };
    for (const auto& ax : th_.axioms.entries()) add_leaf(ax.id, ax.formula, ax.arity, 0);
    for (const auto& c : cfg_.combinators) {
      const CombinatorDef* d = th_.combinators.find(c);
      if (!d) throw UnknownIdentifier("unknown combinator " + c);
      add_leaf(c, d->type, kUnknownArity, 2);
    }
    if (cfg_.use_d) compounds_.push_back({"D", true, {}, {}, kUnknownArity});
    for (const auto& name : cfg_.schemas) {
      const SchemaDef* s = th_.schemas.find(name);
      if (!s) throw UnknownIdentifier("unknown schema " + name);
      if (s->params.empty()) {
        auto m = mgt(ProofTerm::leaf(name), th_, mo);
        if (!m) throw std::invalid_argument("schema " + name + " has no defined MGT");
        add_leaf(name, *m, s->result_arity, 1);
        continue;
      }
      if (!s->linear()) throw std::invalid_argument("schema " + name + " is not linear; search needs linear schemas");
      SchemaDef d = *s;
      if (!cfg_.arity_typing) {
        for (auto& p : d.params) p.arity = kUnknownArity;
        d.result_arity = kUnknownArity;
      }
      auto rule = derive_schema_rule(d, th_);
      if (!rule) throw std::invalid_argument("schema " + name + " is ill-typed");
      Compound c{name, false, engine::make_template(rule->as_tuple(), syms_), {}, s->result_arity};
      for (const auto& p : s->params) c.param_arity.push_back(p.arity);
      compounds_.push_back(std::move(c));
    }
  }

  SearchResult run(const SearchObserver& obs = {}) {
    start_ = std::chrono::steady_clock::now();
    result_ = {};
    obs_ = &obs;
    for (std::size_t s = cfg_.min_size; s <= cfg_.max_size; ++s) {
      level_ = s;
      found_at_level_ = 0;
      run_level();
      result_.nodes = nodes_;
      if (obs.progress)
        obs.progress("level=" + std::to_string(s) + " nodes=" + std::to_string(nodes_) +
                     " proofs=" + std::to_string(result_.proof_count));
      if (timed_out_) {
        result_.timed_out = true;
        break;
      }
      if (goal_ && found_at_level_ > 0) break;
      result_.lower_bound = s + 1;
    }
    if (goal_) {
      if (!result_.proofs.empty()) {
        result_.min_size = result_.proofs.front().size;
        result_.lower_bound = *result_.min_size;
      } else if (!result_.timed_out) {
        result_.exhausted = true;
      }
    }
    if (result_.timed_out && result_.min_size) result_.lower_bound = *result_.min_size;
    result_.seconds = elapsed();
    return result_;
  }

 private:
  using ProofRef = std::int32_t;  // >= 0: entry index; < 0: leaf -(i+1)
  static constexpr ProofRef kNoRef = std::numeric_limits<ProofRef>::min();

  struct Leaf {
    std::string name;
    engine::Template tmpl;
    int arity;
    int rank;
  };
  struct Compound {
    std::string name;
    bool is_app;
    engine::Template rule;  // $rule(P1, ..., Pk, C)
    std::vector<int> param_arity;
    int result_arity;
  };
  struct Entry {
    int ctor;
    std::vector<ProofRef> kids;
    engine::Template tmpl;
    int arity;
  };
  struct Task {
    bool finish;
    engine::Ref goal;
    ArityReq req;
    std::uint32_t slot;
    int ctor;
    std::uint32_t kid_begin;
    std::uint32_t nkids;
  };

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool compat(int arity, ArityReq r) const { return !cfg_.arity_typing || arity_compatible(arity, r); }

  const engine::Template& tmpl_of(ProofRef r) const {
    return r >= 0 ? entries_[r].tmpl : leaves_[-(r + 1)].tmpl;
  }
  int arity_of(ProofRef r) const { return r >= 0 ? entries_[r].arity : leaves_[-(r + 1)].arity; }

  void run_level() {
    engine::Heap::Mark m = heap_.mark();
    std::unordered_map<std::string, engine::Ref> vars;
    engine::Ref g = goal_ ? heap_.from_formula(*frozen_goal_, vars) : heap_.new_var();
    entries_.clear();
    open_ = 0;
    slots_.assign(1, kNoRef);
    agenda_.clear();
    ArityReq root;
    root.exact = goal_arity_;
    agenda_.push_back({false, g, root, 0, -1, 0, 0});
    halt_ = false;
    search();
    heap_.undo(m);
  }

  bool tick() {
    ++nodes_;
    if ((nodes_ & 1023) == 0 && cfg_.timeout_seconds && elapsed() > *cfg_.timeout_seconds) {
      timed_out_ = true;
      halt_ = true;
    }
    return !halt_;
  }

  // Cheap rejection before instantiating: differing root symbols cannot unify.
  bool may_unify(const engine::Template& t, engine::Ref goal) const {
    std::int32_t h = heap_.head(goal);
    return h == engine::kVarSym || t.code[0] < 0 || t.code[0] == h;
  }

  void search() {
    if (halt_) return;
    if (agenda_.empty()) {
      if (entries_.size() == level_) record();
      return;
    }
    Task t = agenda_.back();
    agenda_.pop_back();
    if (t.finish) {
      finish(t);
    } else if (cfg_.order == SearchOrder::AxiomsFirst) {
      solve_leaves(t);
      solve_reuse(t);
      solve_new(t);
    } else {
      solve_reuse(t);
      solve_new(t);
      solve_leaves(t);
    }
    agenda_.push_back(t);
  }

  void solve_leaves(const Task& t) {
    for (std::size_t i = 0; i < leaves_.size() && !halt_; ++i) {
      const Leaf& l = leaves_[i];
      if (!compat(l.arity, t.req) || !may_unify(l.tmpl, t.goal)) continue;
      if (!tick()) return;
      auto m = heap_.mark();
      engine::Ref r = heap_.instantiate(l.tmpl);
      if (heap_.unify(r, t.goal)) {
        slots_[t.slot] = -static_cast<ProofRef>(i) - 1;
        search();
      }
      heap_.undo(m);
    }
  }

  void solve_reuse(const Task& t) {
    std::size_t n = entries_.size();
    for (std::size_t i = 0; i < n && !halt_; ++i) {
      if (!compat(entries_[i].arity, t.req) || !may_unify(entries_[i].tmpl, t.goal)) continue;
      if (!tick()) return;
      auto m = heap_.mark();
      engine::Ref r = heap_.instantiate(entries_[i].tmpl);
      if (heap_.unify(r, t.goal)) {
        slots_[t.slot] = static_cast<ProofRef>(i);
        search();
      }
      heap_.undo(m);
    }
  }

  void solve_new(const Task& t) {
    if (entries_.size() + open_ >= level_) return;
    for (std::size_t c = 0; c < compounds_.size() && !halt_; ++c) {
      const Compound& k = compounds_[c];
      if (!k.is_app && !compat(k.result_arity, t.req)) continue;
      if (!tick()) return;
      auto m = heap_.mark();
      std::size_t agenda_base = agenda_.size();
      std::uint32_t kid_begin = static_cast<std::uint32_t>(slots_.size());
      if (k.is_app) {
        engine::Ref a = heap_.new_var();
        engine::Ref args[2] = {a, t.goal};
        engine::Ref f = heap_.new_fun(imp_sym_, args);
        slots_.resize(kid_begin + 2, kNoRef);
        ArityReq fun_req;
        if (t.req.exact >= 0) {
          fun_req.exact = t.req.exact + 1;
        } else {
          fun_req.min = t.req.min + 1;
        }
        agenda_.push_back({true, t.goal, t.req, t.slot, static_cast<int>(c), kid_begin, 2});
        agenda_.push_back({false, a, ArityReq{}, kid_begin + 1, -1, 0, 0});
        agenda_.push_back({false, f, fun_req, kid_begin, -1, 0, 0});
      } else {
        engine::Ref r = heap_.instantiate(k.rule);
        std::uint32_t n = static_cast<std::uint32_t>(k.param_arity.size());
        if (!heap_.unify(heap_.arg(r, n), t.goal)) {
          heap_.undo(m);
          continue;
        }
        slots_.resize(kid_begin + n, kNoRef);
        agenda_.push_back({true, t.goal, t.req, t.slot, static_cast<int>(c), kid_begin, n});
        for (std::uint32_t i = n; i-- > 0;) {
          ArityReq pr;
          pr.exact = k.param_arity[i];
          agenda_.push_back({false, heap_.arg(r, i), pr, kid_begin + i, -1, 0, 0});
        }
      }
      ++open_;
      search();
      --open_;
      agenda_.resize(agenda_base);
      slots_.resize(kid_begin);
      heap_.undo(m);
    }
  }

  void finish(const Task& t) {
    std::vector<ProofRef> kids(slots_.begin() + t.kid_begin, slots_.begin() + t.kid_begin + t.nkids);
    for (const auto& e : entries_)
      if (e.ctor == t.ctor && e.kids == kids) return;
    const Compound& k = compounds_[t.ctor];
    Entry e{t.ctor, kids, {}, kUnknownArity};
    auto m = heap_.mark();
    if (k.is_app) {
      engine::Ref f = heap_.instantiate(tmpl_of(kids[0]));
      engine::Ref a = heap_.instantiate(tmpl_of(kids[1]));
      engine::Ref y = heap_.new_var();
      engine::Ref args[2] = {a, y};
      engine::Ref want = heap_.new_fun(imp_sym_, args);
      if (!heap_.unify(f, want)) throw std::logic_error("prover: detachment failed for a solved factor");
      e.tmpl = heap_.extract(y);
      int fa = arity_of(kids[0]);
      e.arity = (cfg_.arity_typing && fa >= 1) ? fa - 1 : kUnknownArity;
    } else {
      engine::Ref r = heap_.instantiate(k.rule);
      for (std::uint32_t i = 0; i < t.nkids; ++i) {
        engine::Ref a = heap_.instantiate(tmpl_of(kids[i]));
        if (!heap_.unify(heap_.arg(r, i), a)) throw std::logic_error("prover: schema premise failed for a solved factor");
      }
      e.tmpl = heap_.extract(heap_.arg(r, t.nkids));
      e.arity = k.result_arity;
    }
    heap_.undo(m);
    entries_.push_back(std::move(e));
    slots_[t.slot] = static_cast<ProofRef>(entries_.size() - 1);
    --open_;
    search();
    ++open_;
    entries_.pop_back();
  }

  ProofTerm build(ProofRef r, std::vector<std::optional<ProofTerm>>& memo) const {
    if (r < 0) return ProofTerm::leaf(leaves_[-(r + 1)].name);
    if (memo[r]) return *memo[r];
    const Entry& e = entries_[r];
    const Compound& k = compounds_[e.ctor];
    ProofTerm t;
    if (k.is_app) {
      t = ProofTerm::app(build(e.kids[0], memo), build(e.kids[1], memo));
    } else {
      std::vector<ProofTerm> args;
      for (ProofRef c : e.kids) args.push_back(build(c, memo));
      t = ProofTerm::schema(k.name, std::move(args));
    }
    memo[r] = t;
    return t;
  }

  void record() {
    std::vector<std::optional<ProofTerm>> memo(entries_.size());
    FoundProof p;
    p.term = build(slots_[0], memo);
    p.size = level_;
    auto m = mgt(p.term, th_, MgtOptions{cfg_.arity_typing});
    if (!m) throw std::logic_error("prover: emitted proof " + print_proof_term(p.term) + " has no MGT");
    if (goal_) {
      if (!subsumes(*m, *goal_))
        throw std::logic_error("prover: MGT of " + print_proof_term(p.term) + " does not subsume the goal");
    } else if (!alpha_equivalent(*m, engine::template_formula(tmpl_of(slots_[0]), syms_))) {
      throw std::logic_error("prover: stored theorem of " + print_proof_term(p.term) + " is not its MGT");
    }
    p.mgt = canonical_variables(*m);
    ++found_at_level_;
    ++result_.proof_count;
    if (obs_ && obs_->proof) obs_->proof(p);
    result_.proofs.push_back(std::move(p));
    if (goal_ && !cfg_.count_all) halt_ = true;
  }

  const Theory& th_;
  std::optional<Formula> goal_;
  std::optional<Formula> frozen_goal_;
  int goal_arity_;
  SearchConfig cfg_;
  engine::SymbolTable syms_;
  engine::Heap heap_;
  std::int32_t imp_sym_ = 0;
  std::vector<Leaf> leaves_;
  std::vector<Compound> compounds_;

  std::vector<Entry> entries_;
  std::vector<Task> agenda_;
  std::vector<ProofRef> slots_;
  std::size_t open_ = 0;
  std::size_t level_ = 0;
  std::size_t found_at_level_ = 0;
  bool halt_ = false;
  bool timed_out_ = false;
  std::uint64_t nodes_ = 0;
  std::chrono::steady_clock::time_point start_;
  SearchResult result_;
  const SearchObserver* obs_ = nullptr;
};

inline SearchResult prove(const Theory& th, const Formula& goal, int goal_arity, const SearchConfig& cfg,
                          const SearchObserver& obs = {}) {
  Prover p(th, goal, goal_arity, cfg);
  return p.run(obs);
}

// Exhaustive variant: all proofs of minimal compacted size.
inline SearchResult min_compacted_size(const Theory& th, const Formula& goal, int goal_arity, SearchConfig cfg,
                                       const SearchObserver& obs = {}) {
  cfg.count_all = true;
  return prove(th, goal, goal_arity, cfg, obs);
}

// All structures up to cfg.max_size with defined MGT, by increasing size.
inline SearchResult enumerate_lemmas(const Theory& th, const SearchConfig& cfg, const SearchObserver& obs = {}) {
  Prover p(th, std::nullopt, kUnknownArity, cfg);
  return p.run(obs);
}

}  // namespace ccs
