#pragma once

#include <random>

#include "synkc/cnf.hpp"
#include "synkc/nnf_io.hpp"
#include "synkc/nnf.hpp"
#include "synkc/oracle.hpp"

namespace synkc::test {

// K(x1,x2,y1,y2) = (x1 | x2) & (~x2 | y1) & (~y1 | y2)
inline NodeId build_k(NnfDag& dag) {
  dag.var_decl() = VarDecl{2, 2};
  NodeId c1 = dag.lor(dag.literal(out_var(1)), dag.literal(out_var(2)));
  NodeId c2 = dag.lor(dag.literal(out_var(2), false), dag.literal(in_var(1)));
  NodeId c3 = dag.lor(dag.literal(in_var(1), false), dag.literal(in_var(2)));
  return dag.land({c1, c2, c3});
}

// H(x1,x2,y1,y2) = (x1 | x2 | y1) & (~x1 | (~x2 & y2))
inline NodeId build_h(NnfDag& dag) {
  dag.var_decl() = VarDecl{2, 2};
  NodeId c1 = dag.lor({dag.literal(out_var(1)), dag.literal(out_var(2)), dag.literal(in_var(1))});
  NodeId inner = dag.land(dag.literal(out_var(2), false), dag.literal(in_var(2)));
  NodeId c2 = dag.lor(dag.literal(out_var(1), false), inner);
  return dag.land(c1, c2);
}

// G(x1,x2,y1,y2) = (~x1|x2|y1) & (x1|~x2) & (x1|~y1) & (x2|y2)
inline const char* g_qdimacs() {
  return "p cnf 4 4\n"
         "a 3 4 0\n"
         "e 1 2 0\n"
         "-1 2 3 0\n"
         "1 -2 0\n"
         "1 -3 0\n"
         "2 4 0\n";
}

// K as QDIMACS (Example 1): vars 1,2 outputs; 3,4 inputs
inline const char* k_qdimacs() {
  return "p cnf 4 3\n"
         "a 3 4 0\n"
         "e 1 2 0\n"
         "1 2 0\n"
         "-2 3 0\n"
         "-3 4 0\n";
}

// Semantic equivalence over the union support, by truth table.
inline bool tt_equal(const NnfDag& dag, NodeId a, NodeId b) {
  std::vector<VarId> sup = dag.support(std::vector<NodeId>{a, b});
  return TruthTable::of(dag, a, sup) == TruthTable::of(dag, b, sup);
}

// random NNF over exactly the given variables (both polarities allowed)
inline NodeId gen_nnf_over(NnfDag& dag, const std::vector<VarId>& vars, int internal,
                           std::mt19937_64& rng) {
  std::vector<NodeId> pool;
  if (vars.empty()) return (rng() & 1) ? dag.const_true() : dag.const_false();
  for (VarId v : vars) {
    pool.push_back(dag.literal(v, true));
    pool.push_back(dag.literal(v, false));
  }
  for (int t = 0; t < internal; ++t) {
    std::vector<NodeId> kids{pool[rng() % pool.size()], pool[rng() % pool.size()]};
    NodeId nd = (rng() & 1) ? dag.land(std::move(kids)) : dag.lor(std::move(kids));
    pool.push_back(nd);
  }
  return pool.back();
}

inline Assignment assign_xy(std::initializer_list<bool> xs, std::initializer_list<bool> ys) {
  Assignment pi;
  std::uint32_t i = 1;
  for (bool v : xs) pi.set(out_var(i++), v);
  std::uint32_t j = 1;
  for (bool v : ys) pi.set(in_var(j++), v);
  return pi;
}

}  // namespace synkc::test
