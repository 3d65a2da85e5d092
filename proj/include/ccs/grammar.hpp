#pragma once

// Linear tree grammars for pure D-terms: a RePair-style compressor, file
// format, expansion and translation into combinator terms.
//
// A right-hand side is a ProofTerm: App nodes, axiom leaves, parameter
// leaves, rank-0 nonterminals as leaves, and calls N(a1, ..., ak) as Schema
// nodes.  Productions only call earlier productions.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ccs/lambda.hpp"
#include "ccs/rewrite.hpp"
#include "ccs/term.hpp"

namespace ccs {

struct Production {
  std::string name;
  std::vector<std::string> params;
  ProofTerm rhs;
  bool operator==(const Production&) const = default;
};

struct LinearTreeGrammar {
  std::vector<Production> productions;
  ProofTerm start;

  const Production* find(const std::string& n) const {
    for (const auto& p : productions)
      if (p.name == n) return &p;
    return nullptr;
  }
  bool operator==(const LinearTreeGrammar&) const = default;
};

class GrammarError : public std::runtime_error {
 public:
  enum class Kind { Syntax, DuplicateNonterminal, NonLinear, Cycle, ArityMismatch, MissingStart };
  GrammarError(Kind k, const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), kind_(k), line_(line) {}
  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

// Edges of a right-hand side: two per App node, one per call argument.
inline std::size_t edge_count(const ProofTerm& t) {
  switch (t.kind()) {
    case ProofTerm::Kind::Leaf:
      return 0;
    case ProofTerm::Kind::App:
      return 2 + edge_count(t.fun()) + edge_count(t.arg());
    default: {
      std::size_t n = t.children().size();
      for (const auto& c : t.children()) n += edge_count(c);
      return n;
    }
  }
}

inline std::size_t grammar_size(const LinearTreeGrammar& g) {
  std::size_t n = edge_count(g.start);
  for (const auto& p : g.productions) n += edge_count(p.rhs);
  return n;
}

// Largest parameter count over the productions.
inline std::size_t max_rank(const LinearTreeGrammar& g) {
  std::size_t r = 0;
  for (const auto& p : g.productions) r = std::max(r, p.params.size());
  return r;
}

inline ProofTerm expand(const LinearTreeGrammar& g) {
  std::unordered_map<std::string, ProofTerm> rank0;
  // Calls with identical argument nodes share their expansion.
  std::map<std::pair<std::string, std::vector<const void*>>, std::pair<std::vector<ProofTerm>, ProofTerm>> calls;
  auto go = [&](auto&& self, const ProofTerm& t, const std::unordered_map<std::string, ProofTerm>& env) -> ProofTerm {
    switch (t.kind()) {
      case ProofTerm::Kind::Leaf: {
        if (auto it = env.find(t.id()); it != env.end()) return it->second;
        if (auto it = rank0.find(t.id()); it != rank0.end()) return it->second;
        const Production* p = g.find(t.id());
        if (p && p->params.empty()) {
          ProofTerm r = self(self, p->rhs, {});
          rank0.emplace(t.id(), r);
          return r;
        }
        return t;
      }
      case ProofTerm::Kind::App:
        return ProofTerm::app(self(self, t.fun(), env), self(self, t.arg(), env));
      default: {
        const Production* p = g.find(t.id());
        if (!p || p->params.size() != t.children().size())
          throw GrammarError(GrammarError::Kind::ArityMismatch, "bad call of " + t.id());
        std::vector<ProofTerm> args;
        std::vector<const void*> key;
        for (const auto& c : t.children()) {
          args.push_back(self(self, c, env));
          key.push_back(args.back().identity());
        }
        auto k = std::make_pair(t.id(), key);
        if (auto it = calls.find(k); it != calls.end()) return it->second.second;
        std::unordered_map<std::string, ProofTerm> inner;
        for (std::size_t i = 0; i < p->params.size(); ++i) inner.emplace(p->params[i], args[i]);
        ProofTerm r = self(self, p->rhs, inner);
        calls.emplace(std::move(k), std::make_pair(std::move(args), r));
        return r;
      }
    }
  };
  return go(go, g.start, {});
}

inline std::string print_grammar(const LinearTreeGrammar& g) {
  std::string out;
  for (const auto& p : g.productions) {
    out += p.name;
    if (!p.params.empty()) {
      out += "(";
      for (std::size_t i = 0; i < p.params.size(); ++i) out += (i ? "," : "") + p.params[i];
      out += ")";
    }
    out += " = " + print_proof_term(p.rhs) + "\n";
  }
  out += "start = " + print_proof_term(g.start) + "\n";
  return out;
}

namespace detail {

inline void leaf_ids(const ProofTerm& t, std::set<std::string>& out) {
  std::unordered_set<const void*> seen;
  auto go = [&](auto&& self, const ProofTerm& u) -> void {
    if (!seen.insert(u.identity()).second) return;
    if (u.is_leaf()) {
      out.insert(u.id());
      return;
    }
    for (const auto& c : u.children()) self(self, c);
  };
  go(go, t);
}

// Orders productions so each only calls earlier ones.
inline void order_productions(LinearTreeGrammar& g) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.productions.size(); ++i) index.emplace(g.productions[i].name, i);
  std::vector<int> state(g.productions.size(), 0);
  std::vector<Production> out;
  auto calls = [&](const ProofTerm& t) {
    std::set<std::string> ids;
    auto go = [&](auto&& self, const ProofTerm& u) -> void {
      if (!u.is_app()) ids.insert(u.id());
      for (const auto& c : u.children()) self(self, c);
    };
    go(go, t);
    return ids;
  };
  auto visit = [&](auto&& self, std::size_t i) -> void {
    if (state[i] == 2) return;
    if (state[i] == 1)
      throw GrammarError(GrammarError::Kind::Cycle, "cyclic grammar through " + g.productions[i].name);
    state[i] = 1;
    for (const auto& id : calls(g.productions[i].rhs))
      if (auto it = index.find(id); it != index.end()) self(self, it->second);
    state[i] = 2;
    out.push_back(g.productions[i]);
  };
  for (std::size_t i = 0; i < g.productions.size(); ++i) visit(visit, i);
  g.productions = std::move(out);
}

inline void check_calls(const LinearTreeGrammar& g, const ProofTerm& t, const std::vector<std::string>& params,
                        const std::string& where) {
  if (t.is_leaf()) {
    const Production* p = g.find(t.id());
    if (p && !p->params.empty() && std::find(params.begin(), params.end(), t.id()) == params.end())
      throw GrammarError(GrammarError::Kind::ArityMismatch,
                         where + ": " + t.id() + " needs " + std::to_string(p->params.size()) + " arguments");
    return;
  }
  if (t.is_schema()) {
    const Production* p = g.find(t.id());
    if (!p) throw GrammarError(GrammarError::Kind::ArityMismatch, where + ": call of undefined " + t.id());
    if (p->params.size() != t.children().size())
      throw GrammarError(GrammarError::Kind::ArityMismatch,
                         where + ": " + t.id() + " takes " + std::to_string(p->params.size()) + " arguments, got " +
                             std::to_string(t.children().size()));
  }
  for (const auto& c : t.children()) check_calls(g, c, params, where);
}

}  // namespace detail

// Validates nonterminal uniqueness, linearity, call arities and acyclicity;
// reorders productions topologically.
inline void validate_grammar(LinearTreeGrammar& g) {
  std::set<std::string> names;
  for (const auto& p : g.productions) {
    if (!names.insert(p.name).second)
      throw GrammarError(GrammarError::Kind::DuplicateNonterminal,
                         "one production per nonterminal violated: " + p.name);
    std::set<std::string> seen;
    for (const auto& x : p.params) {
      if (!seen.insert(x).second)
        throw GrammarError(GrammarError::Kind::NonLinear, "parameter " + x + " of " + p.name + " declared twice");
      std::size_t n = 0;
      auto go = [&](auto&& self, const ProofTerm& t) -> void {
        if (t.is_leaf() && t.id() == x) ++n;
        for (const auto& c : t.children()) self(self, c);
      };
      go(go, p.rhs);
      if (n != 1)
        throw GrammarError(GrammarError::Kind::NonLinear, "parameter " + x + " of " + p.name + " occurs " +
                                                              std::to_string(n) + " times; linearity needs exactly one");
    }
  }
  for (const auto& p : g.productions) detail::check_calls(g, p.rhs, p.params, p.name);
  detail::check_calls(g, g.start, {}, "start");
  detail::order_productions(g);
}

// Format: one production per line "N(x1,...,xk) = rhs" (or "N = rhs"), and
// "start = rhs"; '#' starts a comment.
inline LinearTreeGrammar parse_grammar(std::string_view text) {
  LinearTreeGrammar g;
  bool have_start = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw GrammarError(GrammarError::Kind::Syntax, "expected '='", line_no);
    std::string_view head = detail::trim(line.substr(0, eq));
    ProofTerm rhs;
    try {
      rhs = parse_proof_term(line.substr(eq + 1));
    } catch (const ParseError& e) {
      throw GrammarError(GrammarError::Kind::Syntax, e.what(), line_no);
    }
    if (head == "start") {
      if (have_start) throw GrammarError(GrammarError::Kind::DuplicateNonterminal, "second start line", line_no);
      g.start = rhs;
      have_start = true;
      continue;
    }
    Production p;
    p.rhs = rhs;
    std::size_t lp = head.find('(');
    p.name = std::string(detail::trim(head.substr(0, lp)));
    if (p.name.empty() || !std::all_of(p.name.begin(), p.name.end(), detail::ident_char) || p.name == "D")
      throw GrammarError(GrammarError::Kind::Syntax, "bad nonterminal name '" + p.name + "'", line_no);
    if (lp != std::string_view::npos) {
      if (head.back() != ')') throw GrammarError(GrammarError::Kind::Syntax, "expected ')'", line_no);
      std::string_view inner = head.substr(lp + 1, head.size() - lp - 2);
      std::size_t s = 0;
      while (s <= inner.size()) {
        std::size_t c = inner.find(',', s);
        if (c == std::string_view::npos) c = inner.size();
        std::string x(detail::trim(inner.substr(s, c - s)));
        if (x.empty() || !std::all_of(x.begin(), x.end(), detail::ident_char))
          throw GrammarError(GrammarError::Kind::Syntax, "bad parameter name '" + x + "'", line_no);
        p.params.push_back(std::move(x));
        s = c + 1;
      }
    }
    if (g.find(p.name))
      throw GrammarError(GrammarError::Kind::DuplicateNonterminal,
                         "one production per nonterminal violated: " + p.name, line_no);
    g.productions.push_back(std::move(p));
  }
  if (!have_start) throw GrammarError(GrammarError::Kind::MissingStart, "no start line");
  validate_grammar(g);
  return g;
}

inline LinearTreeGrammar import_grammar(const std::string& path) { return parse_grammar(read_file(path)); }

namespace detail {

// Mutable forest used while compressing.
class GrammarBuilder {
 public:
  enum class Sym { App, Leaf, Param, Call };
  struct Node {
    Sym sym;
    int index;  // leaf id, parameter number or nonterminal
    std::vector<int> kids;
  };
  struct Rule {
    int rank;
    int rhs;
    bool alive = true;
  };

  std::vector<Node> nodes;
  std::vector<std::string> leaf_names;
  std::vector<Rule> rules;
  int start = -1;

  int new_node(Sym s, int index, std::vector<int> kids) {
    nodes.push_back({s, index, std::move(kids)});
    return static_cast<int>(nodes.size() - 1);
  }

  int rank_of(const Node& n) const {
    switch (n.sym) {
      case Sym::App:
        return 2;
      case Sym::Call:
        return rules[n.index].rank;
      default:
        return 0;
    }
  }

  // Roots of all live trees: productions in creation order, then start.
  std::vector<int> roots() const {
    std::vector<int> r;
    for (const auto& rule : rules)
      if (rule.alive) r.push_back(rule.rhs);
    r.push_back(start);
    return r;
  }

  // DAG sharing: every compound node referenced twice becomes a rank-0 rule.
  void load(const ProofTerm& t) {
    TermStore store;
    TermStore::Id root = store.intern(t);
    std::vector<TermStore::Id> order = store.compound_postorder(root);
    std::unordered_map<TermStore::Id, int> indeg;
    for (TermStore::Id c : order)
      for (TermStore::Id k : store.children(c)) ++indeg[k];
    std::unordered_map<std::string, int> leaf_index;
    auto leaf = [&](const std::string& id) {
      auto [it, inserted] = leaf_index.emplace(id, static_cast<int>(leaf_names.size()));
      if (inserted) leaf_names.push_back(id);
      return new_node(Sym::Leaf, it->second, {});
    };
    std::unordered_map<TermStore::Id, int> rule_of;
    std::unordered_map<TermStore::Id, int> tree_of;
    auto ref = [&](TermStore::Id c) -> int {
      if (store.is_leaf(c)) return leaf(store.name(c));
      if (auto it = rule_of.find(c); it != rule_of.end()) return new_node(Sym::Call, it->second, {});
      return tree_of.at(c);
    };
    for (TermStore::Id c : order) {
      int n = new_node(Sym::App, 0, {ref(store.fun(c)), ref(store.arg(c))});
      if (indeg[c] >= 2 && c != root) {
        rules.push_back({0, n});
        rule_of.emplace(c, static_cast<int>(rules.size() - 1));
      } else {
        tree_of.emplace(c, n);
      }
    }
    start = store.is_leaf(root) ? leaf(store.name(root)) : tree_of.at(root);
  }

  struct Digram {
    Sym psym;
    int pindex;
    int pos;
    Sym csym;
    int cindex;
    auto operator<=>(const Digram&) const = default;
  };

  Digram digram(int p, int pos) const {
    const Node& a = nodes[p];
    const Node& b = nodes[a.kids[pos]];
    return {a.sym, a.index, pos, b.sym, b.index};
  }

  bool eligible(int p, int pos, int max_rank) const {
    const Node& c = nodes[nodes[p].kids[pos]];
    if (c.sym == Sym::Param) return false;
    return rank_of(nodes[p]) - 1 + rank_of(c) <= max_rank;
  }

  template <typename F>
  void preorder(F&& f) const {
    for (int r : roots()) {
      std::vector<int> stack{r};
      while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        f(n);
        const auto& k = nodes[n].kids;
        for (auto it = k.rbegin(); it != k.rend(); ++it) stack.push_back(*it);
      }
    }
  }

  // Non-overlapping occurrences of every digram, counted greedily in preorder.
  std::map<Digram, std::vector<std::pair<int, int>>> occurrences(int max_rank) const {
    std::map<Digram, std::vector<std::pair<int, int>>> occ;
    std::map<Digram, std::unordered_set<int>> used;
    preorder([&](int p) {
      for (int i = 0; i < static_cast<int>(nodes[p].kids.size()); ++i) {
        if (!eligible(p, i, max_rank)) continue;
        Digram d = digram(p, i);
        int c = nodes[p].kids[i];
        auto& u = used[d];
        if (u.count(p) || u.count(c)) continue;
        u.insert(p);
        u.insert(c);
        occ[d].emplace_back(p, c);
      }
    });
    return occ;
  }

  // One RePair step; false when no digram occurs twice.
  bool replace_most_frequent(int max_rank) {
    auto occ = occurrences(max_rank);
    // Earliest first occurrence breaks ties; preorder position of the parent.
    std::unordered_map<int, std::size_t> position;
    std::size_t counter = 0;
    preorder([&](int n) { position.emplace(n, counter++); });
    const std::vector<std::pair<int, int>>* best = nullptr;
    Digram best_d{};
    for (const auto& [d, list] : occ) {
      if (list.size() < 2) continue;
      if (!best || list.size() > best->size() ||
          (list.size() == best->size() && position[list.front().first] < position[best->front().first])) {
        best = &list;
        best_d = d;
      }
    }
    if (!best) return false;
    auto [p0, c0] = best->front();
    int pos = best_d.pos;
    int np = static_cast<int>(nodes[p0].kids.size());
    int nc = static_cast<int>(nodes[c0].kids.size());
    int rank = np - 1 + nc;
    // rhs: parent symbol over parameters, with the child symbol at `pos`.
    int param = 0;
    std::vector<int> pk;
    for (int i = 0; i < np; ++i) {
      if (i == pos) {
        std::vector<int> ck;
        for (int j = 0; j < nc; ++j) ck.push_back(new_node(Sym::Param, param++, {}));
        pk.push_back(new_node(nodes[c0].sym, nodes[c0].index, std::move(ck)));
      } else {
        pk.push_back(new_node(Sym::Param, param++, {}));
      }
    }
    int rhs = new_node(nodes[p0].sym, nodes[p0].index, std::move(pk));
    rules.push_back({rank, rhs});
    int rule = static_cast<int>(rules.size() - 1);
    std::vector<std::pair<int, int>> list = *best;
    for (auto [p, c] : list) {
      std::vector<int> kids;
      const auto& old = nodes[p].kids;
      for (int i = 0; i < static_cast<int>(old.size()); ++i) {
        if (i == pos) {
          kids.insert(kids.end(), nodes[c].kids.begin(), nodes[c].kids.end());
        } else {
          kids.push_back(old[i]);
        }
      }
      nodes[p] = {Sym::Call, rule, std::move(kids)};
    }
    return true;
  }

  // new_node may reallocate `nodes`, so nodes are read by value here.
  int copy_with(int n, const std::vector<int>& args) {
    Node src = nodes[n];
    if (src.sym == Sym::Param) return args[src.index];
    std::vector<int> kids;
    for (int k : src.kids) kids.push_back(copy_with(k, args));
    return new_node(src.sym, src.index, std::move(kids));
  }

  std::size_t edges(int n) const {
    const Node& x = nodes[n];
    std::size_t e = x.kids.size();
    for (int k : x.kids) e += edges(k);
    return e;
  }

  // Inlines rules that are used once or whose removal shrinks the grammar.
  void prune() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::size_t> uses(rules.size(), 0);
      preorder([&](int n) {
        if (nodes[n].sym == Sym::Call) ++uses[nodes[n].index];
      });
      for (std::size_t r = rules.size(); r-- > 0;) {
        if (!rules[r].alive) continue;
        long long c = static_cast<long long>(uses[r]);
        long long e = static_cast<long long>(edges(rules[r].rhs));
        long long k = rules[r].rank;
        // Zero-gain rules stay: they still give bracket abstraction a shared combinator.
        if (c > 1 && (c - 1) * e - c * k >= 0) continue;
        rules[r].alive = false;
        for (int root : roots())
          inline_calls(root, static_cast<int>(r));
        changed = true;
        break;
      }
    }
  }

  void inline_calls(int n, int rule) {
    std::vector<int> kids = nodes[n].kids;
    for (int k : kids) inline_calls(k, rule);
    if (nodes[n].sym == Sym::Call && nodes[n].index == rule) {
      int copy = copy_with(rules[rule].rhs, kids);
      nodes[n] = nodes[copy];
    }
  }

  LinearTreeGrammar output(const std::set<std::string>& taken) const {
    LinearTreeGrammar g;
    std::unordered_map<int, std::string> names;
    std::size_t next = 1;
    auto fresh = [&](const std::string& prefix) {
      std::string n;
      do n = prefix + std::to_string(next++);
      while (taken.count(n));
      return n;
    };
    std::vector<std::string> params;
    for (std::size_t i = 1; params.size() < 8; ++i) {
      std::string y = "y" + std::to_string(i);
      if (!taken.count(y)) params.push_back(y);
    }
    std::function<ProofTerm(int)> term = [&](int n) -> ProofTerm {
      const Node& x = nodes[n];
      switch (x.sym) {
        case Sym::Leaf:
          return ProofTerm::leaf(leaf_names[x.index]);
        case Sym::Param:
          return ProofTerm::leaf(params[x.index]);
        case Sym::App:
          return ProofTerm::app(term(x.kids[0]), term(x.kids[1]));
        default: {
          const std::string& name = names.at(x.index);
          if (x.kids.empty()) return ProofTerm::leaf(name);
          std::vector<ProofTerm> args;
          for (int k : x.kids) args.push_back(term(k));
          return ProofTerm::schema(name, std::move(args));
        }
      }
    };
    for (std::size_t r = 0; r < rules.size(); ++r)
      if (rules[r].alive) names.emplace(static_cast<int>(r), fresh("N"));
    for (std::size_t r = 0; r < rules.size(); ++r) {
      if (!rules[r].alive) continue;
      Production p;
      p.name = names.at(static_cast<int>(r));
      for (int i = 0; i < rules[r].rank; ++i) p.params.push_back(params[i]);
      p.rhs = term(rules[r].rhs);
      g.productions.push_back(std::move(p));
    }
    g.start = term(start);
    // Later rules may have been substituted into earlier right-hand sides.
    order_productions(g);
    std::unordered_map<std::string, std::string> rename;
    next = 1;
    for (const auto& p : g.productions) rename.emplace(p.name, fresh("N"));
    auto go = [&](auto&& self, const ProofTerm& t) -> ProofTerm {
      if (t.is_app()) return ProofTerm::app(self(self, t.fun()), self(self, t.arg()));
      auto it = rename.find(t.id());
      const std::string& id = it == rename.end() ? t.id() : it->second;
      if (t.is_leaf()) return ProofTerm::leaf(id);
      std::vector<ProofTerm> args;
      for (const auto& c : t.children()) args.push_back(self(self, c));
      return ProofTerm::schema(id, std::move(args));
    };
    for (auto& p : g.productions) {
      p.name = rename.at(p.name);
      p.rhs = go(go, p.rhs);
    }
    g.start = go(go, g.start);
    return g;
  }
};

}  // namespace detail

struct CompressOptions {
  int max_rank = 4;
};

// Grammar whose expansion is `t`: DAG sharing, then repeated replacement of
// the most frequent digram, then inlining of productions that cost edges.
// Never larger than the shared DAG (twice the compacted size).
inline LinearTreeGrammar compress_grammar(const ProofTerm& t, CompressOptions opts = {}) {
  std::set<std::string> taken;
  detail::leaf_ids(t, taken);
  detail::GrammarBuilder shared;
  shared.load(t);
  LinearTreeGrammar dag = shared.output(taken);
  detail::GrammarBuilder b = shared;
  while (b.replace_most_frequent(opts.max_rank)) {
  }
  b.prune();
  LinearTreeGrammar g = b.output(taken);
  return grammar_size(g) <= grammar_size(dag) ? g : dag;
}

// Single CL-term: each production becomes λ params . rhs, is translated by
// bracket abstraction and substituted for its calls.
inline ProofTerm grammar_to_cl(const LinearTreeGrammar& g, BracketOptions opts = {}) {
  std::unordered_map<std::string, ProofTerm> cl;
  auto to_lambda = [&](auto&& self, const ProofTerm& t, const std::vector<std::string>& params) -> LambdaTerm {
    switch (t.kind()) {
      case ProofTerm::Kind::Leaf:
        if (std::find(params.begin(), params.end(), t.id()) != params.end()) return LambdaTerm::var(t.id());
        return LambdaTerm::constant(t.id());
      case ProofTerm::Kind::App:
        return LambdaTerm::app(self(self, t.fun(), params), self(self, t.arg(), params));
      default: {
        LambdaTerm r = LambdaTerm::constant(t.id());
        for (const auto& c : t.children()) r = LambdaTerm::app(r, self(self, c, params));
        return r;
      }
    }
  };
  auto substitute = [&](const ProofTerm& t) {
    std::unordered_map<const void*, std::pair<ProofTerm, ProofTerm>> memo;
    auto go = [&](auto&& self, const ProofTerm& u) -> ProofTerm {
      if (auto it = memo.find(u.identity()); it != memo.end()) return it->second.second;
      ProofTerm r = u;
      if (u.is_leaf()) {
        if (auto it = cl.find(u.id()); it != cl.end()) r = it->second;
      } else {
        r = ProofTerm::app(self(self, u.fun()), self(self, u.arg()));
      }
      memo.emplace(u.identity(), std::make_pair(u, r));
      return r;
    };
    return go(go, t);
  };
  auto translate = [&](const ProofTerm& rhs, const std::vector<std::string>& params) {
    LambdaTerm l = to_lambda(to_lambda, rhs, params);
    for (auto it = params.rbegin(); it != params.rend(); ++it) l = LambdaTerm::abs(*it, l);
    return substitute(lambda_to_cl(l, opts));
  };
  for (const auto& p : g.productions) cl.insert_or_assign(p.name, translate(p.rhs, p.params));
  return translate(g.start, {});
}

}  // namespace ccs
