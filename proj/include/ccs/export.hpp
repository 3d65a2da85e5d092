#pragma once

// DOT and JSON renderings of proofs, factor lists, search results and
// compression metrics.  JSON documents carry "format" and "version" keys.

#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "ccs/metrics.hpp"
#include "ccs/search.hpp"
#include "ccs/term.hpp"

namespace ccs {

using Json = nlohmann::ordered_json;

inline constexpr int kJsonVersion = 1;

// One node per factor ("f<label>") and per leaf ("a<id>"); a factor has one
// edge per label or leaf occurrence in its right-hand side, numbered left to
// right, so the function side of an application comes first.
inline std::string export_dot(const FactorList& fl) {
  std::unordered_map<std::string, bool> is_label;
  for (const auto& f : fl.factors) is_label[f.label] = true;
  auto node = [&](const std::string& id) { return is_label.count(id) ? "f" + id : "a" + id; };
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::vector<std::string> leaves;
  std::unordered_map<std::string, bool> leaf_seen;
  auto note_leaf = [&](const std::string& id) {
    if (!is_label.count(id) && !leaf_seen[id]) {
      leaf_seen[id] = true;
      leaves.push_back(id);
    }
  };
  std::string edges;
  for (const auto& f : fl.factors) {
    std::vector<std::string> refs;
    auto go = [&](auto&& self, const ProofTerm& t) -> void {
      if (t.is_leaf()) {
        refs.push_back(t.id());
        return;
      }
      for (const auto& c : t.children()) self(self, c);
    };
    go(go, f.rhs);
    for (std::size_t i = 0; i < refs.size(); ++i) {
      note_leaf(refs[i]);
      edges += "  " + quote(node(f.label)) + " -> " + quote(node(refs[i])) + " [label=\"" + std::to_string(i) + "\"];\n";
    }
  }
  if (fl.factors.empty()) note_leaf(fl.root);
  std::string out = "digraph proof {\n  ordering=out;\n";
  for (const auto& f : fl.factors) {
    std::string attrs = "label=" + quote(f.label + " = " + print_proof_term(f.rhs)) + ", shape=box";
    if (f.label == fl.root) attrs += ", peripheries=2";
    out += "  " + quote(node(f.label)) + " [" + attrs + "];\n";
  }
  for (const auto& l : leaves) out += "  " + quote(node(l)) + " [label=" + quote(l) + ", shape=plaintext];\n";
  out += edges;
  out += "}\n";
  return out;
}

// Distinct subterms in postorder; children refer to earlier node ids.
inline Json proof_nodes_json(const ProofTerm& t) {
  TermStore store;
  TermStore::Id root = store.intern(t);
  std::unordered_map<TermStore::Id, std::size_t> index;
  Json nodes = Json::array();
  auto go = [&](auto&& self, TermStore::Id n) -> std::size_t {
    if (auto it = index.find(n); it != index.end()) return it->second;
    Json kids = Json::array();
    for (TermStore::Id c : store.children(n)) kids.push_back(self(self, c));
    Json j;
    std::size_t id = nodes.size();
    j["id"] = id;
    switch (store.kind(n)) {
      case ProofTerm::Kind::Leaf:
        j["kind"] = "leaf";
        j["name"] = store.name(n);
        break;
      case ProofTerm::Kind::App:
        j["kind"] = "app";
        break;
      default:
        j["kind"] = "schema";
        j["name"] = store.name(n);
    }
    j["children"] = std::move(kids);
    nodes.push_back(std::move(j));
    index.emplace(n, id);
    return id;
  };
  std::size_t r = go(go, root);
  return Json{{"format", "ccs-proof-nodes"}, {"version", kJsonVersion}, {"root", r}, {"nodes", std::move(nodes)}};
}

inline ProofTerm proof_from_nodes_json(const Json& j) {
  std::vector<ProofTerm> built;
  for (const auto& n : j.at("nodes")) {
    std::vector<ProofTerm> kids;
    for (const auto& c : n.at("children")) kids.push_back(built.at(c.get<std::size_t>()));
    std::string kind = n.at("kind").get<std::string>();
    if (kind == "leaf") {
      built.push_back(ProofTerm::leaf(n.at("name").get<std::string>()));
    } else if (kind == "app") {
      if (kids.size() != 2) throw std::invalid_argument("app node needs two children");
      built.push_back(ProofTerm::app(kids[0], kids[1]));
    } else if (kind == "schema") {
      built.push_back(ProofTerm::schema(n.at("name").get<std::string>(), std::move(kids)));
    } else {
      throw std::invalid_argument("unknown node kind " + kind);
    }
  }
  return built.at(j.at("root").get<std::size_t>());
}

inline Json factor_list_json(const FactorList& fl) {
  Json factors = Json::array();
  for (const auto& f : fl.factors) factors.push_back({{"label", f.label}, {"rhs", print_proof_term(f.rhs)}});
  return Json{{"format", "ccs-factor-list"}, {"version", kJsonVersion}, {"root", fl.root}, {"factors", factors}};
}

inline FactorList factor_list_from_json(const Json& j) {
  FactorList fl;
  fl.root = j.at("root").get<std::string>();
  for (const auto& f : j.at("factors"))
    fl.factors.push_back({f.at("label").get<std::string>(), parse_proof_term(f.at("rhs").get<std::string>())});
  return fl;
}

inline Json metrics_json(const CompressionMetrics& m) {
  Json j{{"xc", m.xc}, {"gs", m.gs}, {"lc", m.lc}};
  j["sc"] = m.sc ? Json(*m.sc) : Json(nullptr);
  j["mc"] = m.mc ? Json(*m.mc) : Json(nullptr);
  j["max_rank"] = m.max_rank;
  j["ratios"] = {{"xc_over_lc", m.xc_over_lc()}, {"xc2_over_gs", m.xc2_over_gs()}};
  j["pure_terms"] = m.pure_terms;
  return j;
}

struct ReportedProof {
  FoundProof found;
  ProofTerm simplified;
  std::size_t sc = 0;                // compacted size after simplification
  std::optional<std::size_t> xc;     // compacted size of the expanded pure proof, when computed
};

inline Json proof_json(const ReportedProof& p, const std::string& imp, const LabelPolicy& policy) {
  Json j;
  j["factor_list"] = print_factor_list(to_factor_list(p.found.term, policy));
  j["term"] = print_proof_term(p.found.term);
  j["size"] = p.found.size;
  j["simplified"] = print_factor_list(to_factor_list(p.simplified, policy));
  j["sc"] = p.sc;
  j["xc"] = p.xc ? Json(*p.xc) : Json(nullptr);
  j["mgt"] = to_string(p.found.mgt, imp);
  return j;
}

inline Json search_json(const SearchResult& r, const std::vector<ReportedProof>& proofs, const std::string& imp,
                        const LabelPolicy& policy) {
  Json j{{"format", "ccs-search-result"}, {"version", kJsonVersion}};
  Json list = Json::array();
  for (const auto& p : proofs) list.push_back(proof_json(p, imp, policy));
  j["proofs"] = std::move(list);
  j["min_size"] = r.min_size ? Json(*r.min_size) : Json(nullptr);
  j["lower_bound"] = r.lower_bound;
  j["proof_count"] = r.proof_count;
  j["exhausted"] = r.exhausted;
  j["timed_out"] = r.timed_out;
  j["nodes"] = r.nodes;
  return j;
}

}  // namespace ccs
