#include "synkc/refine.hpp"

#include <algorithm>
#include <set>

namespace synkc {

FDef normalize_fdef(FDef def) {
  if (def.base == FDef::Base::Xor) {
    // Fold arg signs into the negation flag.
    for (Lit& l : def.args) {
      if (!l.positive) {
        l.positive = true;
        def.negated = !def.negated;
      }
    }
  }
  if (def.args.empty()) {
    // canonical constants: const1 = {And, false}, const0 = {And, true}
    bool value = (def.base == FDef::Base::And) ? !def.negated : def.negated;
    def.base = FDef::Base::And;
    def.negated = !value;
    return def;
  }
  if (def.args.size() == 1) {
    // identity / not, canonically an unnegated And of one literal
    if (def.negated) {
      def.args[0].positive = !def.args[0].positive;
      def.negated = false;
    }
    def.base = FDef::Base::And;
  } else if (def.base != FDef::Base::Xor) {
    // De Morgan when every argument is negative: nand/nor spellings
    bool all_neg = true;
    for (const Lit& l : def.args)
      if (l.positive) all_neg = false;
    if (all_neg) {
      for (Lit& l : def.args) l.positive = true;
      def.base = (def.base == FDef::Base::And) ? FDef::Base::Or : FDef::Base::And;
      def.negated = !def.negated;
    }
  }
  std::sort(def.args.begin(), def.args.end());
  return def;
}

FDef FDef::cofactor(VarId v, bool value) const {
  FDef out;
  out.base = base;
  out.negated = negated;
  bool anded_zero = false, ored_one = false;
  for (const Lit& l : args) {
    if (l.var != v) {
      out.args.push_back(l);
      continue;
    }
    bool bit = (l.positive == value);
    switch (base) {
      case Base::And:
        if (!bit) anded_zero = true;
        break;
      case Base::Or:
        if (bit) ored_one = true;
        break;
      case Base::Xor:
        if (bit) out.negated = !out.negated;
        break;
    }
  }
  if (anded_zero) return normalize_fdef({Base::And, !negated, {}});  // const
  if (ored_one) return normalize_fdef({Base::And, negated, {}});     // const
  if (base == Base::Xor && out.args.empty())
    return normalize_fdef({Base::And, !out.negated, {}});  // xor() == 0
  if (base == Base::Or && out.args.empty())
    return normalize_fdef({Base::And, !negated, {}});  // or() == 0
  return normalize_fdef(std::move(out));
}

std::string FDef::display_op() const {
  if (args.empty()) {
    bool value = (base == Base::And) ? !negated : negated;
    return value ? "const1" : "const0";
  }
  if (args.size() == 1 && base != Base::Xor) return args[0].positive ? "identity" : "not";
  switch (base) {
    case Base::And: return negated ? "nand" : "and";
    case Base::Or: return negated ? "nor" : "or";
    case Base::Xor: return negated ? "xnor" : "xor";
  }
  return "?";
}

const FDef& FDefSystem::def(VarId x) const {
  auto it = defs_.find(x);
  if (it == defs_.end()) throw Error("no functional definition for " + to_string(x));
  return it->second;
}

bool FDefSystem::would_cycle(VarId x, const FDef& def) const {
  // cycle iff x is reachable from any output argument through existing defs
  std::vector<VarId> stack;
  std::set<VarId> seen;
  for (const Lit& l : def.args)
    if (l.var.kind == VarKind::Output && seen.insert(l.var).second) stack.push_back(l.var);
  while (!stack.empty()) {
    VarId v = stack.back();
    stack.pop_back();
    if (v == x) return true;
    auto it = defs_.find(v);
    if (it == defs_.end()) continue;
    for (const Lit& l : it->second.args)
      if (l.var.kind == VarKind::Output && seen.insert(l.var).second) stack.push_back(l.var);
  }
  return false;
}

bool FDefSystem::try_add(VarId x, FDef def) {
  if (defs_.count(x)) return false;
  def = normalize_fdef(std::move(def));
  for (const Lit& l : def.args)
    if (l.var == x) return false;
  if (would_cycle(x, def)) return false;
  defs_.emplace(x, std::move(def));
  return true;
}

std::vector<VarId> FDefSystem::topo_order() const {
  // Kahn with min-index tie break for deterministic circuits.
  std::map<VarId, int> pending;  // unresolved defined-output args
  std::map<VarId, std::vector<VarId>> dependents;
  for (const auto& [x, def] : defs_) {
    int count = 0;
    for (const Lit& l : def.args) {
      if (l.var.kind == VarKind::Output && defs_.count(l.var)) {
        ++count;
        dependents[l.var].push_back(x);
      }
    }
    pending[x] = count;
  }
  std::set<VarId> ready;
  for (const auto& [x, c] : pending)
    if (c == 0) ready.insert(x);
  std::vector<VarId> order;
  while (!ready.empty()) {
    VarId x = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(x);
    for (VarId d : dependents[x])
      if (--pending[d] == 0) ready.insert(d);
  }
  if (order.size() != defs_.size()) throw Error("f-def system is cyclic");
  return order;
}

FDefSystem FDefSystem::restricted(const std::vector<VarId>& support) const {
  std::set<VarId> keep(support.begin(), support.end());
  FDefSystem out;
  for (const auto& [x, def] : defs_) {
    if (!keep.count(x)) continue;
    bool args_ok = true;
    for (const Lit& l : def.args)
      if (!keep.count(l.var)) args_ok = false;
    if (args_ok) out.defs_.emplace(x, def);
  }
  return out;
}

FDefSystem FDefSystem::cofactored(VarId v, bool value) const {
  FDefSystem out;
  for (const auto& [x, def] : defs_) {
    if (x == v) continue;
    out.defs_.emplace(x, def.cofactor(v, value));
  }
  return out;
}

namespace {

// NNF circuit (pos, neg rails) of a definition body, with output args mapped
// through previously built rails.
std::pair<NodeId, NodeId> def_body_rails(
    NnfDag& dag, const FDef& def,
    const std::function<std::pair<NodeId, NodeId>(const Lit&)>& arg_rails) {
  std::vector<NodeId> pos_parts, neg_parts;
  if (def.base == FDef::Base::Xor) {
    if (def.args.size() != 2) throw Error("xor f-defs are 2-ary");
    auto [a, na] = arg_rails(def.args[0]);
    auto [b, nb] = arg_rails(def.args[1]);
    NodeId x = dag.lor(dag.land(a, nb), dag.land(na, b));
    NodeId nx = dag.lor(dag.land(a, b), dag.land(na, nb));
    return def.negated ? std::pair{nx, x} : std::pair{x, nx};
  }
  for (const Lit& l : def.args) {
    auto [p, n] = arg_rails(l);
    pos_parts.push_back(p);
    neg_parts.push_back(n);
  }
  NodeId body, nbody;
  if (def.base == FDef::Base::And) {
    body = dag.conj(pos_parts);
    nbody = dag.disj(neg_parts);
  } else {
    body = dag.disj(pos_parts);
    nbody = dag.conj(neg_parts);
  }
  return def.negated ? std::pair{nbody, body} : std::pair{body, nbody};
}

}  // namespace

NodeId FDefSystem::fun_to_nnf(NnfDag& dag, bool prime_outputs,
                              std::optional<std::pair<VarId, bool>> fold) const {
  auto lit_rails = [&](const Lit& l) -> std::pair<NodeId, NodeId> {
    if (fold && l.var == fold->first) {
      bool bit = (l.positive == fold->second);
      return bit ? std::pair{dag.const_true(), dag.const_false()}
                 : std::pair{dag.const_false(), dag.const_true()};
    }
    VarId v = l.var;
    if (prime_outputs && v.kind == VarKind::Output) v = primed(v);
    return {dag.literal(v, l.positive), dag.literal(v, !l.positive)};
  };
  std::vector<NodeId> parts;
  for (const auto& [x, def] : defs_) {
    auto [body, nbody] = def_body_rails(dag, def, lit_rails);
    VarId xv = prime_outputs ? primed(x) : x;
    parts.push_back(dag.lor(dag.land(dag.literal(xv, true), body),
                            dag.land(dag.literal(xv, false), nbody)));
  }
  return dag.conj(std::move(parts));
}

namespace {

struct ClauseIndex {
  std::set<Clause> live;
  explicit ClauseIndex(const ClauseSet& s) {
    for (std::size_t i : s.live_indices()) live.insert(s.clause(i));
  }
  bool has(Clause c) const { return live.count(normalize_clause(std::move(c))) != 0; }
};

struct Candidate {
  FDef def;
  // ordering: arg count, then base rank, then args
  friend bool operator<(const Candidate& a, const Candidate& b) {
    auto ka = std::tuple(a.def.args.size(), static_cast<int>(a.def.base), a.def.negated,
                         a.def.args);
    auto kb = std::tuple(b.def.args.size(), static_cast<int>(b.def.base), b.def.negated,
                         b.def.args);
    return ka < kb;
  }
  friend bool operator==(const Candidate& a, const Candidate& b) { return a.def == b.def; }
};

}  // namespace

bool find_fd(const ClauseSet& s, FDefSystem& system) {
  ClauseIndex idx(s);
  std::vector<std::size_t> live = s.live_indices();
  bool changed = false;

  for (VarId alpha : s.output_support()) {
    if (system.contains(alpha)) continue;
    std::vector<Candidate> candidates;
    auto add = [&](FDef def) {
      Candidate c{normalize_fdef(std::move(def))};
      if (std::find(candidates.begin(), candidates.end(), c) == candidates.end())
        candidates.push_back(std::move(c));
    };

    for (std::size_t ci : live) {
      const Clause& c = s.clause(ci);
      auto it = std::find_if(c.begin(), c.end(),
                             [&](const Lit& l) { return l.var == alpha; });
      if (it == c.end()) continue;
      bool alpha_pos = it->positive;
      std::vector<Lit> rest;
      for (const Lit& l : c)
        if (l.var != alpha) rest.push_back(l);

      if (rest.size() == 1) {
        // unary: (~a | b) & (a | ~b) is identity, signs decide not/identity
        Lit b = rest[0];
        if (alpha_pos) {
          // c = (a | b): second клause of a <-> ~b… check both readings
          if (idx.has({Lit{alpha, false}, b.negated()}))
            add({FDef::Base::And, false, {b.negated()}});
        } else {
          // c = (~a | b): with (a | ~b) present this encodes a <-> b
          if (idx.has({Lit{alpha, true}, b.negated()}))
            add({FDef::Base::And, false, {b}});
        }
        continue;
      }
      if (!alpha_pos && rest.size() >= 2) {
        // big OR clause (~a | b1 | .. | bk): a <-> (b1 | .. | bk)
        bool all = true;
        for (const Lit& b : rest)
          if (!idx.has({Lit{alpha, true}, b.negated()})) all = false;
        if (all) add({FDef::Base::Or, false, rest});
      }
      if (alpha_pos && rest.size() >= 2) {
        // big AND clause (a | ~b1 | .. | ~bk): a <-> (b1 & .. & bk)
        bool all = true;
        std::vector<Lit> args;
        for (const Lit& b : rest) {
          args.push_back(b.negated());
          if (!idx.has({Lit{alpha, false}, b.negated()})) all = false;
        }
        if (all) add({FDef::Base::And, false, args});
      }
      if (!alpha_pos && rest.size() == 2) {
        // a <-> (u (+) v) needs (~a|u|v) [this clause], (~a|~u|~v),
        // (a|~u|v), (a|u|~v); xnor arrives as the same pattern with a
        // flipped literal sign, folded by normalization.
        Lit u = rest[0], v = rest[1];
        if (idx.has({Lit{alpha, false}, u.negated(), v.negated()}) &&
            idx.has({Lit{alpha, true}, u.negated(), v}) &&
            idx.has({Lit{alpha, true}, u, v.negated()})) {
          add({FDef::Base::Xor, false, {u, v}});
        }
      }
    }

    std::sort(candidates.begin(), candidates.end());
    for (const Candidate& c : candidates) {
      if (system.try_add(alpha, c.def)) {
        changed = true;
        break;
      }
    }
  }
  return changed;
}

Outcome theta_tautology(NnfDag& dag, const ClauseSet& s, const FDefSystem& fdefs, VarId x,
                        bool a, SatService& sat) {
  if (fdefs.contains(x)) throw Error("theta pivot must not be functionally determined");
  // premise: F|_{x=a} & EQ & Fun_T(X',Y)|_{x'=1-a}; conclusion: F(X',Y)|_{x'=1-a}
  ClauseSet s_a = s.cofactor(x, a);
  ClauseSet s_na = s.cofactor(x, !a);
  NodeId f_a = s_a.to_nnf(dag, false);
  NodeId f_na_primed = s_na.to_nnf(dag, true);
  std::vector<NodeId> eq_parts;
  for (VarId xj : s.output_support()) {
    if (xj == x || fdefs.contains(xj)) continue;
    VarId xp = primed(xj);
    eq_parts.push_back(dag.lor(dag.land(dag.literal(xj, true), dag.literal(xp, true)),
                               dag.land(dag.literal(xj, false), dag.literal(xp, false))));
  }
  NodeId fun = fdefs.fun_to_nnf(dag, true, std::pair{x, !a});
  NodeId premise = dag.conj({f_a, dag.conj(std::move(eq_parts)), fun});
  NodeId theta = dag.lor(dag.negate(premise), f_na_primed);
  return sat.is_tautology(dag, theta);
}

FdRefineResult fd_refine(const ClauseSet& s, FDefSystem fdefs, SatService& sat) {
  FdRefineResult result{s, std::move(fdefs), 0, false};
  NnfDag scratch;  // theta formulas are query-only, kept out of caller arenas
  // Out is fixed at entry: variables that leave the support during a pivot
  // still get their (then vacuous) theta checks so they too end up in T'.
  const std::vector<VarId> out_vars = s.output_support();
  const int max_rounds = static_cast<int>(s.x_order().size()) + 1;
  bool changed = true;
  while (changed) {
    changed = false;
    ++result.rounds;
    if (result.rounds > max_rounds + 1)
      throw Error("fd_refine failed to reach a fixpoint within |X| rounds");
    if (find_fd(result.clauses, result.fdefs)) changed = true;
    for (VarId x : out_vars) {
      if (result.fdefs.contains(x)) continue;
      Outcome t0 = theta_tautology(scratch, result.clauses, result.fdefs, x, false, sat);
      if (t0 == Outcome::Timeout) {
        result.timeout = true;
        return result;
      }
      if (t0 == Outcome::True) {
        ClauseSet next = result.clauses.cofactor(x, true);
        next.add_clause({Lit{x, true}});
        result.clauses = std::move(next);
        result.fdefs.try_add(x, FDef{FDef::Base::And, false, {}});  // const1
        changed = true;
        continue;
      }
      Outcome t1 = theta_tautology(scratch, result.clauses, result.fdefs, x, true, sat);
      if (t1 == Outcome::Timeout) {
        result.timeout = true;
        return result;
      }
      if (t1 == Outcome::True) {
        ClauseSet next = result.clauses.cofactor(x, false);
        next.add_clause({Lit{x, false}});
        result.clauses = std::move(next);
        result.fdefs.try_add(x, FDef{FDef::Base::And, true, {}});  // const0
        changed = true;
      }
    }
  }
  return result;
}

RefinementReport check_refines(NnfDag& dag, NodeId f_tilde, NodeId f,
                               const std::vector<VarId>& y_vars, SatService& sat) {
  RefinementReport report;
  ForallExistsResult a = sat.forall_exists_valid(dag, y_vars, f, f_tilde);
  switch (a.kind) {
    case ForallExistsResult::Kind::Valid: report.cond_a = CondStatus::Holds; break;
    case ForallExistsResult::Kind::Counterexample:
      report.cond_a = CondStatus::Fails;
      report.cond_a_witness = std::move(a.y_witness);
      break;
    case ForallExistsResult::Kind::Timeout: report.cond_a = CondStatus::Timeout; break;
  }

  // (b): F(X,Y) & F~(X',Y) & ~F(X',Y) unsat.
  std::vector<VarId> xs;
  for (VarId v : dag.support(f))
    if (v.kind == VarKind::Output) xs.push_back(v);
  for (VarId v : dag.support(f_tilde))
    if (v.kind == VarKind::Output) xs.push_back(v);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  Binding prime;
  for (VarId x : xs)
    prime[x] = Bound{dag.literal(primed(x), true), dag.literal(primed(x), false)};
  NodeId ft_primed = dag.substitute(f_tilde, prime);
  NodeId f_primed = dag.substitute(f, prime);
  SatResult b = sat.is_sat(
      dag, {RootSpec{f, false}, RootSpec{ft_primed, false}, RootSpec{f_primed, true}});
  switch (b.kind) {
    case SatResult::Kind::Unsat: report.cond_b = CondStatus::Holds; break;
    case SatResult::Kind::Sat: {
      report.cond_b = CondStatus::Fails;
      for (const auto& [v, val] : b.model.values())
        if (v.kind == VarKind::Input || v.primed) report.cond_b_witness.set(v, val);
      break;
    }
    case SatResult::Kind::Timeout: report.cond_b = CondStatus::Timeout; break;
  }
  return report;
}

NodeId get_def_ckt(NnfDag& dag, const FDefSystem& fdefs,
                   std::map<VarId, std::pair<NodeId, NodeId>>* rails_out) {
  std::vector<VarId> topo = fdefs.topo_order();
  for (const auto& [x, def] : fdefs.defs()) {
    for (const Lit& l : def.args)
      if (l.var.kind == VarKind::Output && !fdefs.contains(l.var))
        throw Error("get_def_ckt: T must be the full output support of Fun_T");
  }
  std::map<VarId, std::pair<NodeId, NodeId>> rails;
  for (VarId x : topo) {
    auto arg_rails = [&](const Lit& l) -> std::pair<NodeId, NodeId> {
      if (l.var.kind == VarKind::Output) {
        auto r = rails.at(l.var);
        return l.positive ? r : std::pair{r.second, r.first};
      }
      return {dag.literal(l.var, l.positive), dag.literal(l.var, !l.positive)};
    };
    rails[x] = def_body_rails(dag, fdefs.def(x), arg_rails);
  }
  std::vector<NodeId> parts;
  for (const auto& [x, r] : rails) {
    parts.push_back(dag.lor(dag.land(dag.literal(x, true), r.first),
                            dag.land(dag.literal(x, false), r.second)));
  }
  if (rails_out) *rails_out = rails;
  return dag.conj(std::move(parts));
}

}  // namespace synkc
