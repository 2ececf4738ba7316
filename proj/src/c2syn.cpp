#include "synkc/c2syn.hpp"

#include <algorithm>
#include <set>

namespace synkc {

VarId choose_output_var(const ClauseSet& s, const std::vector<VarId>& candidates) {
  if (candidates.empty()) throw Error("choose_output_var: no candidates");
  // score scaled by 2^62: clauses wider than 62 literals contribute nothing
  std::map<VarId, unsigned __int128> score;
  for (VarId v : candidates) score[v] = 0;
  for (std::size_t i : s.live_indices()) {
    const Clause& c = s.clause(i);
    if (c.size() > 62) continue;
    unsigned __int128 w = static_cast<unsigned __int128>(1) << (62 - c.size());
    for (const Lit& l : c) {
      auto it = score.find(l.var);
      if (it != score.end()) it->second += w;
    }
  }
  VarId best = candidates.front();
  // candidates follow the X sequence; strict improvement keeps the tie-break
  for (VarId v : candidates) {
    if (score[v] > score[best]) best = v;
  }
  return best;
}

BranchPartition branch_partition(const ClauseSet& s, VarId x) {
  MccPartition mcc = clause_graph_mccs(s);
  std::set<std::size_t> pos_parts, neg_parts;
  for (std::size_t i : s.live_indices()) {
    for (const Lit& l : s.clause(i)) {
      if (l.var != x) continue;
      (l.positive ? pos_parts : neg_parts).insert(*mcc.clause_to_part[i]);
    }
  }
  BranchPartition out;
  for (std::size_t p = 0; p < mcc.parts.size(); ++p) {
    bool in1 = pos_parts.count(p), in2 = neg_parts.count(p);
    for (std::size_t i : mcc.parts[p]) {
      if (in1) out.s1.push_back(i);
      if (in2) out.s2.push_back(i);
      if (!in1 && !in2) out.s3.push_back(i);
    }
  }
  std::sort(out.s1.begin(), out.s1.end());
  std::sort(out.s2.begin(), out.s2.end());
  std::sort(out.s3.begin(), out.s3.end());
  return out;
}

namespace {

struct Compiler {
  NnfDag& dag;
  SatService& sat;
  const CompileOptions& opts;
  CompileResult result;

  NodeId finish(NodeId root, ProvTag tag) {
    result.certificate.emplace_back(root, tag);
    switch (tag) {
      case ProvTag::Degenerate: ++result.stats.degenerate_exits; break;
      case ProvTag::DefCkt: ++result.stats.defckt_exits; break;
      case ProvTag::GacksExact: ++result.stats.gacks_exits; break;
      case ProvTag::Branch: break;
    }
    return root;
  }

  NodeId run(const ClauseSet& s, const FDefSystem& fdefs, int level) {
    result.stats.max_level = std::max(result.stats.max_level, level);
    if (level > static_cast<int>(s.x_order().size()))
      throw Error("c2syn: recursion exceeded |X| levels");
    std::vector<VarId> out_vars = s.output_support();

    // Line 2: validity / inconsistency. The clause sets here are duplicate-
    // and tautology-free, so a live clause already rules out validity.
    if (s.has_empty_clause()) return finish(dag.const_false(), ProvTag::Degenerate);
    if (s.live_count() == 0) return finish(dag.const_true(), ProvTag::Degenerate);
    NodeId f = s.to_nnf(dag);
    SatResult sat_f = sat.is_sat(dag, {RootSpec{f, false}});
    if (sat_f.kind == SatResult::Kind::Timeout) throw Timeout{};
    if (sat_f.kind == SatResult::Kind::Unsat)
      return finish(dag.const_false(), ProvTag::Degenerate);

    // Line 4: semantically independent of Y -> model projection circuit.
    Outcome indep_y = sat.semantically_independent(dag, f, s.input_support());
    if (indep_y == Outcome::Timeout) throw Timeout{};
    if (indep_y == Outcome::True) {
      std::vector<NodeId> lits;
      for (VarId x : out_vars) lits.push_back(dag.literal(x, sat_f.model.get(x)));
      return finish(dag.conj(std::move(lits)), ProvTag::Degenerate);
    }

    // Line 7: semantically independent of Out. The output-free equivalent
    // <S>[Out -> pi] is returned instead of plain 1: each exit must keep its
    // satisfiable input region exact, otherwise a later branch combination
    // can admit models at inputs its own side cannot realize.
    Outcome indep_x = sat.semantically_independent(dag, f, out_vars);
    if (indep_x == Outcome::Timeout) throw Timeout{};
    if (indep_x == Outcome::True) {
      Binding fix_outputs;
      for (VarId x : out_vars)
        fix_outputs[x] = Bound{sat_f.model.get(x) ? dag.const_true() : dag.const_false()};
      return finish(dag.substitute(f, fix_outputs), ProvTag::Degenerate);
    }

    // Line 10: FDRefine.
    FdRefineResult fd = fd_refine(s, fdefs, sat);
    if (fd.timeout) throw Timeout{};
    const ClauseSet& sp = fd.clauses;

    bool all_fd = true;
    for (VarId x : out_vars)
      if (!fd.fdefs.contains(x)) all_fd = false;
    if (all_fd) {
      std::vector<VarId> keep = out_vars;
      for (VarId y : sp.input_support()) keep.push_back(y);
      for (VarId y : s.input_support()) keep.push_back(y);
      std::map<VarId, std::pair<NodeId, NodeId>> rails;
      NodeId ckt = get_def_ckt(dag, fd.fdefs.restricted(keep), &rails);
      // realizability residue: <S'> with every output replaced by its
      // definition circuit; makes the result exactly equivalent to <S'>
      Binding compose;
      for (const auto& [x, r] : rails) compose[x] = Bound{r.first, r.second};
      NodeId residue = dag.substitute(sp.to_nnf(dag), compose);
      return finish(dag.land(ckt, residue), ProvTag::DefCkt);
    }

    // Lines 14-17: GACKS attempt, capped at deeper levels since the error
    // formula grows with every retry.
    bool try_gacks = opts.always_try_gacks || level == 0 ||
                     static_cast<int>(out_vars.size()) <= opts.gacks_cap;
    if (try_gacks) {
      ++result.stats.gacks_attempts;
      NodeId fp = sp.to_nnf(dag);
      SynAnalysis analysis(dag, fp, out_vars);
      SkolemVector psi = gacks_skolem(analysis);
      ErrorFormulaResult err = error_formula_check(dag, fp, psi, sat);
      if (err.verdict == ErrorFormulaResult::Verdict::Timeout) throw Timeout{};
      if (err.verdict == ErrorFormulaResult::Verdict::Correct) {
        // <S'>[X -> Psi] is exactly the realizable input region of <S'>
        Binding compose;
        for (std::size_t j = 0; j < psi.order.size(); ++j)
          compose[psi.order[j]] = Bound{psi.pos_roots[j], psi.neg_roots[j]};
        NodeId residue = dag.substitute(fp, compose);
        return finish(dag.land(skolem_to_synnnf(dag, psi), residue), ProvTag::GacksExact);
      }
    }

    // Lines 18-30: branch on an output variable.
    ++result.stats.branches;
    result.stats.stage2 = true;
    if (result.stats.branches > (std::int64_t{1} << std::min<std::size_t>(
                                     s.x_order().size(), 62)))
      throw Error("c2syn: branch count exceeded 2^|X|");
    std::vector<VarId> candidates;
    for (VarId x : sp.output_support())
      if (!fd.fdefs.contains(x)) candidates.push_back(x);
    if (candidates.empty())
      throw Error("c2syn: no branch candidate outside T'");
    VarId x = choose_output_var(sp, candidates);
    BranchPartition parts = branch_partition(sp, x);

    auto recurse = [&](const std::vector<std::size_t>& indices,
                       std::optional<bool> x_value) {
      ClauseSet sub = sp.restricted_to(indices);
      FDefSystem defs = fd.fdefs;
      if (x_value) {
        sub = sub.cofactor(x, *x_value);
        defs = defs.cofactored(x, *x_value);
      }
      std::vector<VarId> keep = sub.output_support();
      for (VarId y : sub.input_support()) keep.push_back(y);
      return run(sub, defs.restricted(keep), level + 1);
    };
    NodeId t1 = recurse(parts.s1, false);
    NodeId t2 = recurse(parts.s2, true);
    NodeId t3 = recurse(parts.s3, std::nullopt);
    NodeId combined = dag.land(
        t3, dag.lor(dag.land(dag.literal(x, true), t2), dag.land(dag.literal(x, false), t1)));
    return finish(combined, ProvTag::Branch);
  }

  struct Timeout {};
};

}  // namespace

CompileResult compile(NnfDag& dag, const ClauseSet& s, SatService& sat,
                      const CompileOptions& opts) {
  Compiler c{dag, sat, opts, {}};
  try {
    c.result.root = c.run(s, FDefSystem{}, 0);
    c.result.status = CompileResult::Status::Ok;
  } catch (const Compiler::Timeout&) {
    c.result.status = CompileResult::Status::Timeout;
  }
  return c.result;
}

}  // namespace synkc
