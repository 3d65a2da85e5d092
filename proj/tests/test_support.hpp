#pragma once

#include <set>
#include <string>
#include <vector>

#include "ccs/ccs.hpp"

#ifndef CCS_DATA_DIR
#define CCS_DATA_DIR "data"
#endif

namespace ccs::tst {

inline std::string data_path(const std::string& rel) { return std::string(CCS_DATA_DIR) + "/" + rel; }

inline Formula fn_goal(std::size_t n) { return *fn_problem(n).goal; }

inline Theory fn_theory(const Calculus& calc = default_calculus()) { return fn_problem(0).theory(calc); }

// The f^8 schemas r0(p:1,q:0):0 = p q and r1(p:1,q:1):1 = B p q.
inline Calculus f8_schema_calculus() { return load_config(data_path("schemas/f8.cfg"), default_calculus()); }

// 2 (2 (... (2 1))) with n applications.
inline ProofTerm fn_pure_proof(std::size_t n) {
  ProofTerm t = ProofTerm::leaf("1");
  for (std::size_t i = 0; i < n; ++i) t = ProofTerm::app(ProofTerm::leaf("2"), t);
  return t;
}

inline std::set<std::string> printed_factor_lists(const std::vector<FoundProof>& proofs,
                                                  const LabelPolicy& labels = LabelPolicy::numeric(2)) {
  std::set<std::string> out;
  for (const auto& p : proofs) out.insert(print_factor_list(to_factor_list(p.term, labels)));
  return out;
}

inline const std::vector<std::string>& f8_b_proofs() {
  static const std::vector<std::string> lists = {
      "[3 = B 2 2, 4 = 3 (3 (3 (3 1)))]",
      "[3 = B 2, 4 = 3 2, 5 = 3 4, 6 = 4 (5 (5 1))]",
      "[3 = B 2, 4 = 3 2, 5 = 3 4, 6 = 5 (5 (4 1))]",
      "[3 = B 2, 4 = 3 2, 5 = 3 4, 6 = 5 (4 (5 1))]",
      "[3 = B 2, 4 = 3 (3 (3 2)), 5 = 4 (4 1)]",
      "[3 = B 2 2, 4 = B 3 3, 5 = 4 (4 1)]",
  };
  return lists;
}

inline const std::vector<std::string>& f8_schema_proofs() {
  static const std::vector<std::string> lists = {
      "[3 = r1(2, 2), 4 = r1(3, 3), 5 = r0(4, r0(4, 1))]",
      "[3 = r1(2, 2), 4 = r1(3, 3), 5 = r0(r1(4, 4), 1)]",
  };
  return lists;
}

// Proof check that does not share code with the prover's MGT: one equation per
// application over the expanded tree, solved by a single mgu.
inline bool independently_proves(const ProofTerm& t, const Formula& goal, const Theory& th) {
  auto m = mgt_by_constraints(t, th);
  return m && subsumes(*m, goal);
}

}  // namespace ccs::tst
