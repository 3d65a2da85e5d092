// Proves P(f^8(a)) three ways and compresses the plain proof.
//   f8_tour [data-dir]

#include <iostream>

#include "ccs/ccs.hpp"

using namespace ccs;

namespace {

void show(const char* title, const SearchResult& r) {
  std::cout << title << ": least size " << (r.min_size ? std::to_string(*r.min_size) : "-") << ", "
            << r.proof_count << " proof(s)\n";
  for (const auto& p : r.proofs) std::cout << "  " << print_factor_list(to_factor_list(p.term, LabelPolicy::numeric(2))) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::string data = argc > 1 ? argv[1] : "data";
  Problem fp = fn_problem(8);
  Formula goal = *fp.goal;

  SearchConfig plain;
  plain.count_all = true;
  SearchResult d = prove(fp.theory(), goal, 0, plain);
  show("D only", d);

  SearchConfig with_b = plain;
  with_b.combinators = {"B"};
  show("D and B", prove(fp.theory(), goal, 0, with_b));

  Calculus calc = load_config(data + "/schemas/f8.cfg", default_calculus());
  SearchConfig schemas = plain;
  schemas.use_d = false;
  schemas.schemas = {"r0", "r1"};
  schemas.arity_typing = true;
  SearchResult s = prove(fp.theory(calc), goal, 0, schemas);
  show("schemas r0, r1", s);
  for (const auto& p : s.proofs) {
    ProofTerm nf = normalize(expand_schemas(p.term, calc.schemas), builtin_combinators()).term;
    std::cout << "  normal form is the D-only proof: " << (nf == d.proofs.front().term ? "yes" : "no") << "\n";
  }

  CompressionReport rep = compress_proof(d.proofs.front().term, builtin_combinators());
  std::cout << "grammar:\n" << print_grammar(rep.grammar);
  std::cout << "CL-term: " << print_factor_list(to_factor_list(rep.cl, LabelPolicy::numeric(2))) << "\n";
  std::cout << "XC " << rep.metrics.xc << ", GS " << rep.metrics.gs << ", LC " << rep.metrics.lc << "\n";
}
