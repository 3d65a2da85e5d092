#pragma once

// Proof structures: D-terms, CL-terms and PS-terms.
//
// A ProofTerm is an immutable DAG node: a leaf (axiom id, combinator name or
// factor label), a binary application, or a saturated schema instance.
// Identical subterms may or may not share a node; equality is structural.
//
// Text syntax (application is left-associative juxtaposition):
//   term  := atom { atom }
//   atom  := "(" term ")" | ident | ident "(" term { "," term } ")"
// An identifier immediately followed by "(" (no whitespace) opens an argument
// list: "D(a,b)" is the application a b, any other name gives a schema
// instance.  Purely numeric identifiers never take argument lists, so
// "2(2 1)" reads as 2 (2 1).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ccs/formula.hpp"

namespace ccs {

class ProofTerm {
 public:
  enum class Kind : std::uint8_t { Leaf, App, Schema };

  ProofTerm() : ProofTerm(leaf("?")) {}

  static ProofTerm leaf(std::string id) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Leaf;
    n->hash = detail::hash_mix(std::hash<std::string>{}(id), 0x11);
    n->id = std::move(id);
    return ProofTerm(std::move(n));
  }

  static ProofTerm app(ProofTerm fun, ProofTerm arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    n->hash = detail::hash_mix(detail::hash_mix(0x22, fun.hash()), arg.hash());
    n->tree_size = saturating_add(saturating_add(fun.tree_size(), arg.tree_size()), 1);
    n->height = std::max(fun.height(), arg.height()) + 1;
    n->kids = {std::move(fun), std::move(arg)};
    return ProofTerm(std::move(n));
  }

  static ProofTerm schema(std::string name, std::vector<ProofTerm> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Schema;
    std::size_t h = detail::hash_mix(std::hash<std::string>{}(name), 0x33 + args.size());
    std::uint64_t size = 1;
    std::uint32_t height = 0;
    for (const auto& a : args) {
      h = detail::hash_mix(h, a.hash());
      size = saturating_add(size, a.tree_size());
      height = std::max(height, a.height());
    }
    n->hash = h;
    n->tree_size = size;
    n->height = height + 1;
    n->id = std::move(name);
    n->kids = std::move(args);
    return ProofTerm(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_leaf() const { return node_->kind == Kind::Leaf; }
  bool is_app() const { return node_->kind == Kind::App; }
  bool is_schema() const { return node_->kind == Kind::Schema; }
  // Leaf identifier or schema name; empty for applications.
  const std::string& id() const { return node_->id; }
  const ProofTerm& fun() const { return node_->kids[0]; }
  const ProofTerm& arg() const { return node_->kids[1]; }
  // Application: {fun, arg}; schema: its arguments; leaf: empty.
  const std::vector<ProofTerm>& children() const { return node_->kids; }
  std::size_t hash() const { return node_->hash; }
  // Number of App and Schema nodes of the tree (saturates at 2^64-1).
  std::uint64_t tree_size() const { return node_->tree_size; }
  std::uint32_t height() const { return node_->height; }
  const void* identity() const { return node_.get(); }
  bool same_node(const ProofTerm& o) const { return node_ == o.node_; }

  friend bool operator==(const ProofTerm& a, const ProofTerm& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.id() != b.id() ||
        a.children().size() != b.children().size() || a.tree_size() != b.tree_size())
      return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
      if (!(a.children()[i] == b.children()[i])) return false;
    return true;
  }
  friend bool operator!=(const ProofTerm& a, const ProofTerm& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::string id;
    std::vector<ProofTerm> kids;
    std::size_t hash = 0;
    std::uint64_t tree_size = 0;
    std::uint32_t height = 0;
  };
  static std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b
               ? std::numeric_limits<std::uint64_t>::max()
               : a + b;
  }
  explicit ProofTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct ProofTermHash {
  std::size_t operator()(const ProofTerm& t) const { return t.hash(); }
};

// Hash-consing store: structurally equal terms get the same id.  One store
// belongs to one computation; stores are not synchronized.
class TermStore {
 public:
  using Id = std::uint32_t;
  using Kind = ProofTerm::Kind;

  Id leaf(std::string_view id) { return make(Kind::Leaf, symbol(id), {}); }
  Id app(Id fun, Id arg) {
    Id kids[2] = {fun, arg};
    return make(Kind::App, kAppSymbol, kids);
  }
  Id schema(std::string_view name, std::span<const Id> args) {
    return make(Kind::Schema, symbol(name), args);
  }

  Kind kind(Id t) const { return nodes_[t].kind; }
  bool is_leaf(Id t) const { return nodes_[t].kind == Kind::Leaf; }
  bool is_app(Id t) const { return nodes_[t].kind == Kind::App; }
  const std::string& name(Id t) const { return symbols_[nodes_[t].sym]; }
  std::span<const Id> children(Id t) const {
    const auto& n = nodes_[t];
    return {kids_.data() + n.first_kid, n.num_kids};
  }
  Id fun(Id t) const { return children(t)[0]; }
  Id arg(Id t) const { return children(t)[1]; }
  std::size_t size() const { return nodes_.size(); }

  Id intern(const ProofTerm& t) {
    std::unordered_map<const void*, Id> memo;
    return intern(t, memo);
  }
  Id intern(const ProofTerm& t, std::unordered_map<const void*, Id>& memo) {
    auto it = memo.find(t.identity());
    if (it != memo.end()) return it->second;
    Id r;
    switch (t.kind()) {
      case Kind::Leaf:
        r = leaf(t.id());
        break;
      case Kind::App: {
        Id f = intern(t.fun(), memo);
        Id a = intern(t.arg(), memo);
        r = app(f, a);
        break;
      }
      default: {
        std::vector<Id> args;
        for (const auto& c : t.children()) args.push_back(intern(c, memo));
        r = schema(t.id(), args);
      }
    }
    memo.emplace(t.identity(), r);
    return r;
  }

  // Rebuilds a ProofTerm; shared store nodes become shared ProofTerm nodes.
  ProofTerm extract(Id t) const {
    std::unordered_map<Id, ProofTerm> memo;
    return extract(t, memo);
  }
  ProofTerm extract(Id t, std::unordered_map<Id, ProofTerm>& memo) const {
    auto it = memo.find(t);
    if (it != memo.end()) return it->second;
    ProofTerm r;
    switch (kind(t)) {
      case Kind::Leaf:
        r = ProofTerm::leaf(name(t));
        break;
      case Kind::App:
        r = ProofTerm::app(extract(fun(t), memo), extract(arg(t), memo));
        break;
      default: {
        std::vector<ProofTerm> args;
        for (Id c : children(t)) args.push_back(extract(c, memo));
        r = ProofTerm::schema(name(t), std::move(args));
      }
    }
    memo.emplace(t, r);
    return r;
  }

  // Distinct compound nodes reachable from `root`, children before parents.
  std::vector<Id> compound_postorder(Id root) const {
    std::vector<Id> out;
    std::unordered_set<Id> seen;
    std::vector<std::pair<Id, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [t, expanded] = stack.back();
      stack.pop_back();
      if (is_leaf(t)) continue;
      if (expanded) {
        out.push_back(t);
        continue;
      }
      if (!seen.insert(t).second) continue;
      stack.emplace_back(t, true);
      auto kids = children(t);
      for (std::size_t i = kids.size(); i-- > 0;) stack.emplace_back(kids[i], false);
    }
    return out;
  }

 private:
  static constexpr std::uint32_t kAppSymbol = 0;

  struct Node {
    Kind kind;
    std::uint32_t sym;
    std::uint32_t first_kid;
    std::uint32_t num_kids;
  };
  struct Key {
    Kind kind;
    std::uint32_t sym;
    std::vector<Id> kids;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = detail::hash_mix(static_cast<std::size_t>(k.kind), k.sym);
      for (Id c : k.kids) h = detail::hash_mix(h, c);
      return h;
    }
  };

  std::uint32_t symbol(std::string_view s) {
    auto it = symbol_ids_.find(std::string(s));
    if (it != symbol_ids_.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(symbols_.size());
    symbols_.emplace_back(s);
    symbol_ids_.emplace(std::string(s), id);
    return id;
  }

  Id make(Kind kind, std::uint32_t sym, std::span<const Id> kids) {
    Key key{kind, sym, std::vector<Id>(kids.begin(), kids.end())};
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    Id id = static_cast<Id>(nodes_.size());
    nodes_.push_back({kind, sym, static_cast<std::uint32_t>(kids_.size()),
                      static_cast<std::uint32_t>(kids.size())});
    kids_.insert(kids_.end(), kids.begin(), kids.end());
    index_.emplace(std::move(key), id);
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<Id> kids_;
  std::vector<std::string> symbols_{"@"};
  std::unordered_map<std::string, std::uint32_t> symbol_ids_{{"@", 0}};
  std::unordered_map<Key, Id, KeyHash> index_;
};

// ---------------------------------------------------------------------------
// Size measures

inline std::uint64_t tree_size(const ProofTerm& t) { return t.tree_size(); }
inline std::uint32_t height(const ProofTerm& t) { return t.height(); }

// Number of distinct compound subterms, i.e. inner nodes of the minimal DAG.
// Every partial application counts, and each distinct schema instance counts once.
inline std::size_t compacted_size(const ProofTerm& t) {
  TermStore store;
  return store.compound_postorder(store.intern(t)).size();
}

struct SizeMetrics {
  std::uint64_t tree_size = 0;
  std::uint32_t height = 0;
  std::size_t compacted_size = 0;
};

inline SizeMetrics size_metrics(const ProofTerm& t) {
  return {t.tree_size(), t.height(), compacted_size(t)};
}

// A pure D-term has only applications and leaves that are not combinators.
template <class IsCombinator>
bool is_pure_dterm(const ProofTerm& t, IsCombinator&& is_combinator) {
  TermStore store;
  TermStore::Id root = store.intern(t);
  std::vector<TermStore::Id> stack{root};
  std::unordered_set<TermStore::Id> seen;
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    switch (store.kind(id)) {
      case ProofTerm::Kind::Schema:
        return false;
      case ProofTerm::Kind::Leaf:
        if (is_combinator(store.name(id))) return false;
        break;
      default:
        for (auto c : store.children(id)) stack.push_back(c);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Printing and parsing

namespace detail {

inline bool is_numeric(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline void print_term(const ProofTerm& t, bool as_arg, std::string& out) {
  switch (t.kind()) {
    case ProofTerm::Kind::Leaf:
      out += t.id();
      return;
    case ProofTerm::Kind::Schema:
      out += t.id();
      out += '(';
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ", ";
        print_term(t.children()[i], false, out);
      }
      out += ')';
      return;
    case ProofTerm::Kind::App:
      if (as_arg) out += '(';
      print_term(t.fun(), false, out);
      out += ' ';
      print_term(t.arg(), true, out);
      if (as_arg) out += ')';
      return;
  }
}

inline ProofTerm parse_term_at(Cursor& cur);

inline ProofTerm parse_atom(Cursor& cur) {
  if (cur.accept("(")) {
    ProofTerm t = parse_term_at(cur);
    cur.expect(")");
    return t;
  }
  std::size_t start = cur.pos();
  std::string id = cur.ident();
  if (cur.peek_raw() == '(' && !is_numeric(id)) {
    cur.expect("(");
    std::vector<ProofTerm> args;
    do {
      args.push_back(parse_term_at(cur));
    } while (cur.accept(","));
    cur.expect(")");
    if (id == "D") {
      if (args.size() != 2) throw ParseError("D expects exactly two arguments", start);
      return ProofTerm::app(std::move(args[0]), std::move(args[1]));
    }
    return ProofTerm::schema(std::move(id), std::move(args));
  }
  return ProofTerm::leaf(std::move(id));
}

inline ProofTerm parse_term_at(Cursor& cur) {
  ProofTerm t = parse_atom(cur);
  while (true) {
    char c = cur.peek();
    if (c == '(' || (c != '\0' && ident_char(c))) {
      t = ProofTerm::app(std::move(t), parse_atom(cur));
    } else {
      break;
    }
  }
  return t;
}

}  // namespace detail

inline std::string print_proof_term(const ProofTerm& t) {
  std::string out;
  detail::print_term(t, false, out);
  return out;
}

inline ProofTerm parse_proof_term(std::string_view text) {
  detail::Cursor cur(text);
  if (cur.at_end()) cur.fail("empty proof term");
  ProofTerm t = detail::parse_term_at(cur);
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return t;
}

// ---------------------------------------------------------------------------
// Factor lists

struct Factor {
  std::string label;
  ProofTerm rhs;  // compound; leaves may name labels of earlier factors
  bool operator==(const Factor&) const = default;
};

struct FactorList {
  std::vector<Factor> factors;
  std::string root;  // label of the last factor, or a leaf id when empty
  bool operator==(const FactorList&) const = default;
};

// How factor labels are chosen.  Numeric labels start above the largest
// numeric leaf id of the term (and above `floor`, e.g. the problem's largest
// axiom id).  With a prefix, labels are <prefix>1, <prefix>2, ...
struct LabelPolicy {
  std::uint64_t floor = 0;
  std::string prefix;

  static LabelPolicy numeric(std::uint64_t floor_value = 0) { return {floor_value, {}}; }
  static LabelPolicy prefixed(std::string p = "t") { return {0, std::move(p)}; }
};

class DanglingLabel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Minimal-DAG factor list.  A compound node gets its own factor when it is
// the root or has more than one incoming DAG edge; everything else is written
// inline into the factor that references it, so one factor may hold a whole
// application chain such as "B 2 2".  Factors appear in left-to-right
// postorder of first completion.
inline FactorList to_factor_list(const ProofTerm& t, const LabelPolicy& policy = {}) {
  TermStore store;
  TermStore::Id root = store.intern(t);
  if (store.is_leaf(root)) return {{}, t.id()};

  std::vector<TermStore::Id> order = store.compound_postorder(root);
  std::unordered_map<TermStore::Id, std::size_t> indegree;
  std::uint64_t max_numeric = policy.floor;
  for (TermStore::Id n : order) {
    for (TermStore::Id c : store.children(n)) {
      ++indegree[c];
      if (store.is_leaf(c) && detail::is_numeric(store.name(c)) && store.name(c).size() < 19)
        max_numeric = std::max<std::uint64_t>(max_numeric, std::stoull(store.name(c)));
    }
  }

  std::unordered_map<TermStore::Id, std::string> labels;
  std::uint64_t next = 1;
  FactorList fl;
  auto render = [&](auto&& self, TermStore::Id n, bool top) -> ProofTerm {
    if (store.is_leaf(n)) return ProofTerm::leaf(store.name(n));
    if (!top) {
      auto it = labels.find(n);
      if (it != labels.end()) return ProofTerm::leaf(it->second);
    }
    if (store.is_app(n)) return ProofTerm::app(self(self, store.fun(n), false), self(self, store.arg(n), false));
    std::vector<ProofTerm> args;
    for (TermStore::Id c : store.children(n)) args.push_back(self(self, c, false));
    return ProofTerm::schema(store.name(n), std::move(args));
  };
  for (TermStore::Id n : order) {
    if (n != root && indegree[n] < 2) continue;
    std::string label = policy.prefix.empty() ? std::to_string(max_numeric + next)
                                              : policy.prefix + std::to_string(next);
    ++next;
    fl.factors.push_back({label, render(render, n, true)});
    labels.emplace(n, std::move(label));
  }
  fl.root = fl.factors.back().label;
  return fl;
}

// Expands a factor list back into a single term.  Leaves naming labels of
// earlier factors are replaced; a leaf naming a later factor, a duplicated
// label, or an unknown root is a DanglingLabel error.
inline ProofTerm from_factor_list(const FactorList& fl) {
  std::unordered_map<std::string, ProofTerm> done;
  std::unordered_set<std::string> all_labels;
  for (const auto& f : fl.factors) {
    if (!all_labels.insert(f.label).second) throw DanglingLabel("duplicate factor label " + f.label);
  }
  auto expand = [&](auto&& self, const ProofTerm& t) -> ProofTerm {
    switch (t.kind()) {
      case ProofTerm::Kind::Leaf: {
        auto it = done.find(t.id());
        if (it != done.end()) return it->second;
        if (all_labels.count(t.id()))
          throw DanglingLabel("factor label " + t.id() + " referenced before its definition");
        return t;
      }
      case ProofTerm::Kind::App:
        return ProofTerm::app(self(self, t.fun()), self(self, t.arg()));
      default: {
        std::vector<ProofTerm> args;
        for (const auto& c : t.children()) args.push_back(self(self, c));
        return ProofTerm::schema(t.id(), std::move(args));
      }
    }
  };
  for (const auto& f : fl.factors) {
    if (f.rhs.is_leaf()) throw DanglingLabel("factor " + f.label + " has a bare leaf as right-hand side");
    ProofTerm e = expand(expand, f.rhs);
    done.emplace(f.label, std::move(e));
  }
  if (fl.factors.empty()) return ProofTerm::leaf(fl.root);
  auto it = done.find(fl.root);
  if (it == done.end()) throw DanglingLabel("root " + fl.root + " is not a factor label");
  return it->second;
}

// "[2 = 1 1, 3 = 1 2, 4 = 2 (3 3)]"; a leaf proof prints as "[1]".
inline std::string print_factor_list(const FactorList& fl) {
  std::string out = "[";
  if (fl.factors.empty()) {
    out += fl.root;
  } else {
    for (std::size_t i = 0; i < fl.factors.size(); ++i) {
      if (i) out += ", ";
      out += fl.factors[i].label;
      out += " = ";
      out += print_proof_term(fl.factors[i].rhs);
    }
  }
  out += ']';
  return out;
}

inline FactorList parse_factor_list(std::string_view text) {
  detail::Cursor cur(text);
  cur.expect("[");
  FactorList fl;
  std::string first = cur.ident();
  if (cur.accept("]")) {
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return {{}, first};
  }
  cur.expect("=");
  std::string label = std::move(first);
  while (true) {
    ProofTerm rhs = detail::parse_term_at(cur);
    fl.factors.push_back({label, std::move(rhs)});
    if (cur.accept("]")) break;
    cur.expect(",");
    label = cur.ident();
    cur.expect("=");
  }
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  fl.root = fl.factors.back().label;
  return fl;
}

// Accepts either a factor list or a plain term.
inline ProofTerm parse_proof(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '[') return from_factor_list(parse_factor_list(text));
  return parse_proof_term(text);
}

}  // namespace ccs
