#pragma once

#include <vector>

#include "synkc/synnnf.hpp"

namespace synkc {

// Ordered, dual-rail Skolem function candidates sharing one arena.
struct SkolemVector {
  std::vector<VarId> order;      // the X sequence the vector was built for
  std::vector<NodeId> pos_roots;  // psi_i, aligned with order
  std::vector<NodeId> neg_roots;  // ~psi_i

  std::size_t node_count(const NnfDag& dag) const;
};

// GACKS construction: psi'_i = alpha_i^{10}, composed from n down to 1 with
// the dual rail built during composition (never by re-negating composed
// results). F need not be in SynNNF; correctness is then a separate check.
SkolemVector gacks_skolem(SynAnalysis& analysis);

struct QuantElimResult {
  NodeId root;
  bool exact;  // set iff membership was verified by the caller
};

// exists X_1^i F as Delta_{i+1} F [bar X -> ~X]; exact only for SynNNF.
QuantElimResult eliminate_outputs(SynAnalysis& analysis, int i, bool membership_verified);

struct ErrorFormulaResult {
  enum class Verdict { Correct, Incorrect, Timeout } verdict;
  Assignment y_witness;    // Incorrect only
  Assignment x_model;      // X values satisfying F at the witness
  Assignment psi_values;   // Psi(Y*) values
};

// Single SAT call on F(X,Y) & ~F(X',Y) & AND_i (x'_i <-> psi_i).
ErrorFormulaResult error_formula_check(NnfDag& dag, NodeId f_root, const SkolemVector& psi,
                                       SatService& sat);

// Theorem-4 style refinement AND_i ((x_i & psi_i) | (~x_i & ~psi_i)); passes
// the syntactic SynNNF path check by construction.
NodeId skolem_to_synnnf(NnfDag& dag, const SkolemVector& psi);

}  // namespace synkc
