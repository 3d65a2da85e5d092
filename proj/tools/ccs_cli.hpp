#pragma once

// Command-line front end.  run() is separate from main() so the tests can
// drive it in-process.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ccs/ccs.hpp"

namespace ccs::cli {

enum Exit : int { kOk = 0, kNoProof = 1, kUsage = 2, kTimeout = 3, kDivergence = 4 };

struct Options {
  std::string problem;
  std::string term;
  std::string config;
  std::string schemas;
  std::string combinators;
  std::string detachment = "auto";
  std::string arity_typing = "off";
  std::optional<std::size_t> max_size;
  std::size_t min_size = 0;
  bool all = false;
  std::optional<double> timeout;
  std::string emit = "factors";
  std::string out;
  std::string order = "axioms";
  std::string portfolio;
  bool oracle_check = false;
  std::size_t oracle_bound = 6;
  std::uint64_t oracle_work = kDefaultOracleWork;
  bool progress = false;
  std::string grammar;
  std::optional<std::size_t> mc;
};

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    auto t = detail::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

// Theory, search configuration and label policy for one run.
struct Setup {
  Calculus calc;
  Theory theory;
  SearchConfig cfg;
  LabelPolicy labels;
};

inline std::uint64_t max_numeric_axiom(const AxiomTable& ax) {
  std::uint64_t m = 0;
  for (const auto& a : ax.entries())
    if (detail::is_numeric(a.id)) m = std::max<std::uint64_t>(m, std::stoull(a.id));
  return m;
}

inline Setup make_setup(const Options& o, const Problem* p, std::size_t default_bound = 12) {
  Setup s;
  s.calc = default_calculus();
  if (!o.config.empty()) s.calc = load_config(o.config, std::move(s.calc));
  if (!o.schemas.empty()) {
    Calculus own = load_config(o.schemas);
    for (const auto& d : own.schemas.entries()) s.cfg.schemas.push_back(d.name);
    s.calc = load_config(o.schemas, std::move(s.calc));
  }
  s.cfg.combinators = split_list(o.combinators);
  s.cfg.use_d = o.detachment == "auto" ? s.cfg.schemas.empty() : o.detachment == "on";
  s.cfg.arity_typing = o.arity_typing == "on";
  s.cfg.min_size = o.min_size;
  s.cfg.max_size = o.max_size.value_or(default_bound);
  s.cfg.timeout_seconds = o.timeout;
  s.cfg.order = o.order == "app" ? SearchOrder::AppFirst : SearchOrder::AxiomsFirst;
  s.cfg.count_all = o.all;
  if (p) {
    s.theory = p->theory(s.calc);
    s.labels = LabelPolicy::numeric(max_numeric_axiom(p->axioms));
  } else {
    s.theory = Theory("imp", AxiomTable{}, s.calc);
  }
  return s;
}

inline ReportedProof report_proof(const FoundProof& f, const Theory& th) {
  ReportedProof r{f, simplify(f.term, th.schemas), 0, std::nullopt};
  r.sc = compacted_size(r.simplified);
  try {
    NormalizeResult nf = normalize(expand_schemas(f.term, th.schemas), th.combinators);
    if (nf.pure) r.xc = compacted_size(nf.term);
  } catch (const BudgetExceeded&) {
  }
  return r;
}

inline std::string read_term_argument(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

class Run {
 public:
  Run(const Options& o, std::ostream& out, std::ostream& err) : o_(o), err_(err), out_(&out) {
    if (!o.out.empty()) {
      file_.open(o.out, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write " + o.out);
      out_ = &file_;
    }
  }

  int prove() {
    Problem p = load_problem(o_.problem);
    if (!p.goal) return usage("problem has no goal; use the lemmas command");
    if (!o_.portfolio.empty()) return portfolio(p);
    Setup s = make_setup(o_, &p);
    SearchObserver obs = observer(s, o_.emit == "factors");
    SearchResult r = ccs::prove(s.theory, *p.goal, p.goal_arity, s.cfg, obs);
    emit_result(r, s, false);
    summary(r);
    int code = exit_code(r);
    if (o_.oracle_check) code = std::max(code, oracle_check(s, p, r));
    return code;
  }

  int minimize() {
    Problem p = load_problem(o_.problem);
    if (!p.goal) return usage("problem has no goal");
    Setup s = make_setup(o_, &p);
    s.cfg.count_all = true;
    SearchResult r = min_compacted_size(s.theory, *p.goal, p.goal_arity, s.cfg, observer(s, false));
    if (o_.emit == "json") {
      emit_result(r, s, false);
    } else if (r.min_size) {
      out() << "(" << *r.min_size << ", " << r.proof_count << ")\n";
    } else {
      out() << "≥ " << r.lower_bound << "\n";
    }
    summary(r);
    int code = exit_code(r);
    if (o_.oracle_check) code = std::max(code, oracle_check(s, p, r));
    return code;
  }

  int lemmas() {
    Problem p = load_problem(o_.problem);
    Setup s = make_setup(o_, &p, 3);
    SearchResult r = enumerate_lemmas(s.theory, s.cfg, observer(s, false));
    if (o_.emit == "json") {
      std::vector<ReportedProof> rs;
      for (const auto& f : r.proofs) rs.push_back(report_proof(f, s.theory));
      out() << search_json(r, rs, p.implication, s.labels).dump(2) << "\n";
    } else {
      FormulaSyntax syn = p.syntax();
      for (const auto& f : r.proofs)
        out() << print_factor_list(to_factor_list(f.term, s.labels)) << " : " << print_native_formula(f.mgt, syn)
              << "\n";
    }
    err_ << r.proofs.size() << " lemma(s) up to size " << s.cfg.max_size << (r.timed_out ? " (timeout)" : "") << ", "
         << r.nodes << " nodes, " << r.seconds << " s\n";
    return r.timed_out ? kTimeout : kOk;
  }

  int oracle() {
    Problem p = load_problem(o_.problem);
    if (!p.goal) return usage("problem has no goal");
    Setup s = make_setup(o_, &p, 6);
    OracleResult r;
    try {
      r = oracle_min_size(s.theory, *p.goal, p.goal_arity, s.cfg, o_.oracle_work);
    } catch (const OracleRefused& e) {
      err_ << "oracle: " << e.what() << "\n";
      return kTimeout;
    }
    if (o_.emit == "json") {
      Json j{{"format", "ccs-oracle-result"}, {"version", kJsonVersion}};
      j["min_size"] = r.min_size ? Json(*r.min_size) : Json(nullptr);
      j["count"] = r.count;
      Json list = Json::array();
      for (const auto& t : r.proofs) list.push_back(print_factor_list(to_factor_list(t, s.labels)));
      j["proofs"] = list;
      j["items"] = r.items;
      j["work"] = r.work;
      out() << j.dump(2) << "\n";
    } else if (r.min_size) {
      out() << "(" << *r.min_size << ", " << r.count << ")\n";
      for (const auto& t : r.proofs) out() << print_factor_list(to_factor_list(t, s.labels)) << "\n";
    } else {
      out() << "none up to " << s.cfg.max_size << "\n";
    }
    err_ << "oracle: " << r.items << " structures, work " << r.work << "\n";
    return r.min_size ? kOk : kNoProof;
  }

  int compress() {
    std::optional<Problem> p;
    if (!o_.problem.empty()) p = load_problem(o_.problem);
    Setup s = make_setup(o_, p ? &*p : nullptr);
    ProofTerm input = parse_proof(read_term_argument(o_.term));
    NormalizeResult nf = normalize(expand_schemas(input, s.theory.schemas), s.theory.combinators);
    if (!nf.pure) return usage("proof does not normalize to a pure D-term");
    ProofTerm pure = nf.term;
    if (p && p->goal && !proves(pure, *p->goal, s.theory))
      return usage("proof does not prove the goal of " + o_.problem);
    LinearTreeGrammar g;
    if (o_.grammar.empty()) {
      g = compress_grammar(pure);
    } else {
      g = import_grammar(o_.grammar);
      if (!(expand(g) == pure)) return usage("grammar " + o_.grammar + " does not expand to the proof");
    }
    ProofTerm cl = grammar_to_cl(g);
    CompressionMetrics m = compute_metrics(pure, cl, g, s.theory.combinators, o_.mc);
    if (input != pure) m.sc = compacted_size(simplify(input, s.theory.schemas));
    FactorList cl_fl = to_factor_list(cl, s.labels);
    if (o_.emit == "json") {
      Json j{{"format", "ccs-compression"}, {"version", kJsonVersion}};
      j["grammar"] = print_grammar(g);
      j["cl"] = print_factor_list(cl_fl);
      j["metrics"] = metrics_json(m);
      out() << j.dump(2) << "\n";
    } else if (o_.emit == "dot") {
      out() << export_dot(cl_fl);
    } else {
      out() << "grammar:\n" << print_grammar(g) << "cl: " << print_factor_list(cl_fl) << "\n"
            << "metrics: " << metrics_json(m).dump() << "\n";
    }
    return kOk;
  }

  int normalize_term() {
    Setup s = make_setup(o_, nullptr);
    ProofTerm t = parse_proof(read_term_argument(o_.term));
    NormalizeResult nf;
    try {
      nf = normalize(expand_schemas(t, s.theory.schemas), s.theory.combinators);
    } catch (const BudgetExceeded& e) {
      err_ << "normalize: " << e.what() << "\n";
      return kTimeout;
    }
    emit_term(nf.term, s.labels);
    if (!nf.pure) {
      err_ << "normalize: result still contains combinators\n";
      return kNoProof;
    }
    return kOk;
  }

  int mgt_command() {
    Problem p = load_problem(o_.problem);
    Setup s = make_setup(o_, &p);
    ProofTerm t = parse_proof(read_term_argument(o_.term));
    auto m = ccs::mgt(t, s.theory, MgtOptions{s.cfg.arity_typing});
    if (!m) {
      out() << "undefined\n";
      return kNoProof;
    }
    out() << print_native_formula(canonical_variables(*m), p.syntax()) << "\n";
    return kOk;
  }

 private:
  std::ostream& out() { return *out_; }

  int usage(const std::string& what) {
    err_ << "error: " << what << "\n";
    return kUsage;
  }

  SearchObserver observer(const Setup& s, bool stream_proofs) {
    SearchObserver obs;
    if (o_.progress) obs.progress = [this](const std::string& line) { err_ << line << "\n"; };
    if (stream_proofs) {
      LabelPolicy labels = s.labels;
      obs.proof = [this, labels](const FoundProof& f) {
        out() << print_factor_list(to_factor_list(f.term, labels)) << "\n";
        out().flush();
      };
    }
    return obs;
  }

  void emit_term(const ProofTerm& t, const LabelPolicy& labels) {
    if (o_.emit == "json") {
      out() << proof_nodes_json(t).dump(2) << "\n";
    } else if (o_.emit == "dot") {
      out() << export_dot(to_factor_list(t, labels));
    } else {
      out() << print_factor_list(to_factor_list(t, labels)) << "\n";
    }
  }

  // Factor-list output is streamed by the observer; the other formats are
  // written once the search is over.
  void emit_result(const SearchResult& r, const Setup& s, bool streamed_factors) {
    if (o_.emit == "json") {
      std::vector<ReportedProof> rs;
      for (const auto& f : r.proofs) rs.push_back(report_proof(f, s.theory));
      out() << search_json(r, rs, s.theory.implication, s.labels).dump(2) << "\n";
    } else if (o_.emit == "dot") {
      for (const auto& f : r.proofs) out() << export_dot(to_factor_list(f.term, s.labels));
    } else if (streamed_factors) {
      for (const auto& f : r.proofs) out() << print_factor_list(to_factor_list(f.term, s.labels)) << "\n";
    }
  }

  void summary(const SearchResult& r) {
    std::ostringstream ss;
    if (r.min_size) {
      ss << "size " << *r.min_size << ", " << r.proof_count << " proof(s)";
    } else {
      ss << "no proof; every proof has size ≥ " << r.lower_bound;
    }
    if (r.timed_out) ss << " (timeout)";
    ss << ", " << r.nodes << " nodes, " << r.seconds << " s";
    err_ << ss.str() << "\n";
  }

  static int exit_code(const SearchResult& r) {
    if (!r.proofs.empty()) return kOk;
    return r.timed_out ? kTimeout : kNoProof;
  }

  int oracle_check(const Setup& s, const Problem& p, const SearchResult& r) {
    SearchConfig oc = s.cfg;
    oc.max_size = std::min(s.cfg.max_size, o_.oracle_bound);
    if (r.min_size && *r.min_size > oc.max_size) {
      err_ << "oracle-check: skipped, size " << *r.min_size << " exceeds --oracle-bound " << oc.max_size << "\n";
      return kOk;
    }
    OracleResult orr;
    try {
      orr = oracle_min_size(s.theory, *p.goal, p.goal_arity, oc, o_.oracle_work);
    } catch (const OracleRefused& e) {
      err_ << "oracle-check: skipped, " << e.what() << "\n";
      return kOk;
    }
    bool agree = true;
    if (r.min_size) {
      agree = orr.min_size == r.min_size && (!s.cfg.count_all || orr.count == r.proof_count);
    } else if (orr.min_size) {
      agree = *orr.min_size >= r.lower_bound;
    }
    auto show = [](std::optional<std::size_t> m, std::size_t c) {
      return m ? "(" + std::to_string(*m) + ", " + std::to_string(c) + ")" : std::string("none");
    };
    if (!agree) {
      err_ << "oracle-check: DIVERGENCE search " << show(r.min_size, r.proof_count) << " oracle "
           << show(orr.min_size, orr.count) << "\n";
      return kDivergence;
    }
    err_ << "oracle-check: agree " << show(orr.min_size, orr.count) << "\n";
    return kOk;
  }

  // Each entry is a schema file, or "plain" for detachment only.  The winner
  // has the smallest SC, then the shortest runtime.
  int portfolio(const Problem& p) {
    struct Entry {
      std::string name;
      Setup setup;
      SearchResult result;
      std::optional<std::size_t> sc;
      std::string error;
    };
    std::vector<Entry> entries;
    for (const auto& name : split_list(o_.portfolio)) {
      Options o = o_;
      o.schemas = name == "plain" ? "" : name;
      entries.push_back({name, make_setup(o, &p), {}, std::nullopt, {}});
    }
    if (entries.empty()) return usage("--portfolio needs at least one entry");
    std::vector<std::thread> threads;
    for (auto& e : entries) {
      threads.emplace_back([&e, &p] {
        try {
          e.result = ccs::prove(e.setup.theory, *p.goal, p.goal_arity, e.setup.cfg);
          for (const auto& f : e.result.proofs) {
            std::size_t sc = report_proof(f, e.setup.theory).sc;
            if (!e.sc || sc < *e.sc) e.sc = sc;
          }
        } catch (const std::exception& ex) {
          e.error = ex.what();
        }
      });
    }
    for (auto& t : threads) t.join();
    const Entry* best = nullptr;
    for (const auto& e : entries) {
      if (!e.error.empty()) {
        err_ << "portfolio " << e.name << ": error: " << e.error << "\n";
        continue;
      }
      err_ << "portfolio " << e.name << ": ";
      summary(e.result);
      if (!e.sc) continue;
      if (!best || *e.sc < *best->sc || (*e.sc == *best->sc && e.result.seconds < best->result.seconds)) best = &e;
    }
    if (!best) {
      bool timeout = std::any_of(entries.begin(), entries.end(), [](const Entry& e) { return e.result.timed_out; });
      return timeout ? kTimeout : kNoProof;
    }
    err_ << "portfolio winner: " << best->name << " (SC " << *best->sc << ")\n";
    emit_result(best->result, best->setup, true);
    return kOk;
  }

  const Options& o_;
  std::ostream& err_;
  std::ostream* out_;
  std::ofstream file_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Proof search and proof compression with combinators and proof schemas", "ccs"};
  app.require_subcommand(1);
  Options o;

  auto search_options = [&](CLI::App* c, bool with_emit_dot) {
    c->add_option("--max-size", o.max_size, "Largest compacted size to try (default 12; lemmas 3, oracle 6)");
    c->add_option("--min-size", o.min_size, "Smallest compacted size to try");
    c->add_option("--timeout", o.timeout, "Wall-clock budget in seconds");
    c->add_option("--schemas", o.schemas, "Schema file; its schemas are the search constructors")->check(CLI::ExistingFile);
    c->add_option("--config", o.config, "Extra combinator and schema definitions")->check(CLI::ExistingFile);
    c->add_option("--combinators", o.combinators, "Comma-separated combinators used as leaves, e.g. B,C");
    c->add_option("--detachment", o.detachment, "Plain application as constructor (auto: on unless --schemas)")
        ->check(CLI::IsMember({"auto", "on", "off"}));
    c->add_option("--arity-typing", o.arity_typing, "Restrict by arity types")->check(CLI::IsMember({"on", "off"}));
    c->add_option("--order", o.order, "Try leaves before compounds (axioms) or after (app)")
        ->check(CLI::IsMember({"axioms", "app"}));
    c->add_option("--out", o.out, "Write results to this file instead of stdout");
    c->add_flag("--progress", o.progress, "Report each deepening level on stderr");
    if (with_emit_dot) {
      c->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"factors", "dot", "json"}));
    } else {
      c->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"factors", "json"}));
    }
  };
  auto oracle_options = [&](CLI::App* c) {
    c->add_flag("--oracle-check", o.oracle_check, "Cross-check the result with the brute-force oracle (exit 4 on divergence)");
    c->add_option("--oracle-bound", o.oracle_bound, "Largest size the oracle check covers (default 6)");
    c->add_option("--oracle-work", o.oracle_work, "Work limit of the oracle");
  };

  auto* prove = app.add_subcommand("prove", "Find a proof of least compacted size");
  prove->add_option("problem", o.problem, "Problem file (native or TPTP) or fn:N")->required();
  search_options(prove, true);
  oracle_options(prove);
  prove->add_flag("--all", o.all, "Report every proof of least size, not only the first");
  prove->add_option("--portfolio", o.portfolio, "Comma-separated schema files (or plain) run concurrently");

  auto* minimize = app.add_subcommand("minimize", "Least compacted size and number of proofs of that size");
  minimize->add_option("problem", o.problem, "Problem file or fn:N")->required();
  search_options(minimize, false);
  oracle_options(minimize);

  auto* lemmas = app.add_subcommand("lemmas", "Enumerate structures with defined MGT up to the size bound");
  lemmas->add_option("problem", o.problem, "Problem file or fn:N")->required();
  search_options(lemmas, false);

  auto* oracle = app.add_subcommand("oracle", "Brute-force bottom-up minimal proofs");
  oracle->add_option("problem", o.problem, "Problem file or fn:N")->required();
  search_options(oracle, false);
  oracle->add_option("--work", o.oracle_work, "Work limit");

  auto* compress = app.add_subcommand("compress", "Grammar-compress a proof and translate it to a CL-term");
  compress->add_option("proof", o.term, "Proof term or factor list, or a file holding one")->required();
  compress->add_option("--problem", o.problem, "Check the proof against this problem");
  compress->add_option("--schemas", o.schemas, "Schema definitions used by the proof")->check(CLI::ExistingFile);
  compress->add_option("--config", o.config, "Extra combinator and schema definitions")->check(CLI::ExistingFile);
  compress->add_option("--grammar", o.grammar, "Use this grammar instead of the internal compressor")
      ->check(CLI::ExistingFile);
  compress->add_option("--mc", o.mc, "Known minimal compacted size of a pure proof");
  compress->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"factors", "dot", "json"}));
  compress->add_option("--out", o.out, "Write results to this file instead of stdout");

  auto* normalize = app.add_subcommand("normalize", "Expand schemas and rewrite combinators");
  normalize->add_option("term", o.term, "Proof term or factor list, or a file holding one")->required();
  normalize->add_option("--schemas", o.schemas, "Schema definitions")->check(CLI::ExistingFile);
  normalize->add_option("--config", o.config, "Extra combinator and schema definitions")->check(CLI::ExistingFile);
  normalize->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"factors", "dot", "json"}));
  normalize->add_option("--out", o.out, "Write results to this file instead of stdout");

  auto* mgt = app.add_subcommand("mgt", "Most general theorem of a proof term");
  mgt->add_option("term", o.term, "Proof term or factor list, or a file holding one")->required();
  mgt->add_option("--problem", o.problem, "Problem whose axioms the term refers to")->required();
  mgt->add_option("--schemas", o.schemas, "Schema definitions")->check(CLI::ExistingFile);
  mgt->add_option("--config", o.config, "Extra combinator and schema definitions")->check(CLI::ExistingFile);
  mgt->add_option("--arity-typing", o.arity_typing, "Shape schema arguments by arity types")
      ->check(CLI::IsMember({"on", "off"}));
  mgt->add_option("--out", o.out, "Write results to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Run r(o, out, err);
    if (*prove) return r.prove();
    if (*minimize) return r.minimize();
    if (*lemmas) return r.lemmas();
    if (*oracle) return r.oracle();
    if (*compress) return r.compress();
    if (*normalize) return r.normalize_term();
    if (*mgt) return r.mgt_command();
  } catch (const ProblemError& e) {
    err << "error: " << o.problem << ": " << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << "\n";
  } catch (const GrammarError& e) {
    err << "error: grammar: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace ccs::cli
