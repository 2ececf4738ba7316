#include "synkc/skolem.hpp"

namespace synkc {

std::size_t SkolemVector::node_count(const NnfDag& dag) const {
  std::vector<NodeId> roots;
  roots.reserve(pos_roots.size() + neg_roots.size());
  roots.insert(roots.end(), pos_roots.begin(), pos_roots.end());
  roots.insert(roots.end(), neg_roots.begin(), neg_roots.end());
  return dag.size(roots);
}

SkolemVector gacks_skolem(SynAnalysis& analysis) {
  NnfDag& dag = analysis.dag();
  const int n = analysis.n();
  SkolemVector psi;
  psi.order = analysis.order();
  psi.pos_roots.assign(n, dag.const_false());
  psi.neg_roots.assign(n, dag.const_true());
  for (int i = n; i >= 1; --i) {
    // One pass over Delta_i F: fix (x_i, bar x_i) to (1, 0) and substitute
    // the already-composed psi_j for x_j (and their duals for bar x_j).
    VarId x = psi.order[i - 1];
    Binding b;
    b[x] = Bound{dag.const_true(), dag.const_false()};
    b[bar_var(x.index)] = Bound{dag.const_false(), dag.const_true()};
    for (int jpos = i + 1; jpos <= n; ++jpos) {
      VarId xj = psi.order[jpos - 1];
      NodeId p = psi.pos_roots[jpos - 1];
      NodeId q = psi.neg_roots[jpos - 1];
      b[xj] = Bound{p, q};
      b[bar_var(xj.index)] = Bound{q, p};
    }
    auto [pos, neg] = dag.substitute_dual(analysis.reduct(i), b);
    psi.pos_roots[i - 1] = pos;
    psi.neg_roots[i - 1] = neg;
  }
  return psi;
}

QuantElimResult eliminate_outputs(SynAnalysis& analysis, int i, bool membership_verified) {
  if (i < 0 || i > analysis.n()) throw Error("eliminate_outputs: index out of range");
  if (i == 0) return {analysis.original(), true};
  NnfDag& dag = analysis.dag();
  Binding bars;
  for (int p = i + 1; p <= analysis.n(); ++p) {
    VarId x = analysis.order()[p - 1];
    bars[bar_var(x.index)] = Bound{dag.literal(x, false), dag.literal(x, true)};
  }
  NodeId r = dag.substitute(analysis.reduct(i + 1), bars);
  return {r, membership_verified};
}

ErrorFormulaResult error_formula_check(NnfDag& dag, NodeId f_root, const SkolemVector& psi,
                                       SatService& sat) {
  for (std::size_t j = 0; j < psi.order.size(); ++j) {
    for (VarId v : dag.support(psi.pos_roots[j]))
      if (v.kind != VarKind::Input)
        throw Error("error_formula_check: psi must be composed over Y only");
  }
  Binding prime;
  for (VarId x : psi.order)
    prime[x] = Bound{dag.literal(primed(x), true), dag.literal(primed(x), false)};
  NodeId f_primed = dag.substitute(f_root, prime);

  std::vector<NodeId> parts;
  parts.reserve(psi.order.size());
  for (std::size_t j = 0; j < psi.order.size(); ++j) {
    VarId xp = primed(psi.order[j]);
    parts.push_back(dag.lor(dag.land(dag.literal(xp, true), psi.pos_roots[j]),
                            dag.land(dag.literal(xp, false), psi.neg_roots[j])));
  }
  NodeId links = dag.conj(std::move(parts));

  SatResult r = sat.is_sat(
      dag, {RootSpec{f_root, false}, RootSpec{f_primed, true}, RootSpec{links, false}});
  switch (r.kind) {
    case SatResult::Kind::Unsat:
      return {ErrorFormulaResult::Verdict::Correct, {}, {}, {}};
    case SatResult::Kind::Timeout:
      return {ErrorFormulaResult::Verdict::Timeout, {}, {}, {}};
    case SatResult::Kind::Sat:
      break;
  }
  ErrorFormulaResult out{ErrorFormulaResult::Verdict::Incorrect, {}, {}, {}};
  for (const auto& [v, val] : r.model.values()) {
    if (v.kind == VarKind::Input && !v.primed) out.y_witness.set(v, val);
    if (v.kind == VarKind::Output && !v.primed) out.x_model.set(v, val);
  }
  for (std::size_t j = 0; j < psi.order.size(); ++j) {
    VarId xp = primed(psi.order[j]);
    if (r.model.has(xp)) out.psi_values.set(psi.order[j], r.model.get(xp));
  }
  return out;
}

NodeId skolem_to_synnnf(NnfDag& dag, const SkolemVector& psi) {
  std::vector<NodeId> parts;
  parts.reserve(psi.order.size());
  for (std::size_t j = 0; j < psi.order.size(); ++j) {
    VarId x = psi.order[j];
    parts.push_back(dag.lor(dag.land(dag.literal(x, true), psi.pos_roots[j]),
                            dag.land(dag.literal(x, false), psi.neg_roots[j])));
  }
  return dag.conj(std::move(parts));
}

}  // namespace synkc
