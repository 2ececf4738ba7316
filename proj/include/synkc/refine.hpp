#pragma once

#include <map>
#include <optional>
#include <vector>

#include "synkc/cnf.hpp"
#include "synkc/sat_backend.hpp"

namespace synkc {

// Canonical functional definition x <-> [~] base(args). Display ops nand,
// nor, xnor, not, const0/const1 are the negated/degenerate spellings:
//   {And,  neg} = nand      {Or,  neg} = nor      {Xor, neg} = xnor
//   {And } with one arg = identity (not, when the arg sign is folded)
//   {And } with no args = const1, negated = const0
// Xor args carry no signs (folded into `negated`).
struct FDef {
  enum class Base : std::uint8_t { And, Or, Xor } base = Base::And;
  bool negated = false;
  std::vector<Lit> args;

  friend bool operator==(const FDef&, const FDef&) = default;
  FDef cofactor(VarId v, bool value) const;
  std::string display_op() const;
};

FDef normalize_fdef(FDef def);

// Acyclic system (T, Fun_T) of functionally determined outputs.
class FDefSystem {
 public:
  bool contains(VarId x) const { return defs_.count(x) != 0; }
  const FDef& def(VarId x) const;
  const std::map<VarId, FDef>& defs() const { return defs_; }
  std::size_t size() const { return defs_.size(); }

  // Adds unless the dependency graph would become cyclic.
  bool try_add(VarId x, FDef def);
  // Linearization: the definition of topo()[k] depends only on earlier vars.
  std::vector<VarId> topo_order() const;

  // Defs whose defined variable or any argument leaves `support` are dropped
  // together with their T membership; args on `v` are folded to `value`.
  FDefSystem restricted(const std::vector<VarId>& support) const;
  FDefSystem cofactored(VarId v, bool value) const;

  // Fun_T as an NNF DAG (over X,Y; primed outputs on request).
  NodeId fun_to_nnf(NnfDag& dag, bool prime_outputs = false,
                    std::optional<std::pair<VarId, bool>> fold = std::nullopt) const;

 private:
  bool would_cycle(VarId x, const FDef& def) const;
  std::map<VarId, FDef> defs_;
};

// FindFD: scans for exact CNF gate encodings of and/or/nand/nor/xor/xnor/
// not/identity (n-ary for the And/Or family, 2-ary for Xor). Candidates are
// processed by ascending output index, then ascending arg count; cycle
// candidates are skipped. Returns true when a definition was added.
bool find_fd(const ClauseSet& s, FDefSystem& system);

// theta_{F,T,x,a} as a single tautology query over X, X', Y.
Outcome theta_tautology(NnfDag& dag, const ClauseSet& s, const FDefSystem& fdefs, VarId x,
                        bool a, SatService& sat);

struct FdRefineResult {
  ClauseSet clauses;
  FDefSystem fdefs;
  int rounds = 0;
  bool timeout = false;
};

// Algorithm: repeat { FindFD; pivot every x with a valid theta } to fixpoint.
FdRefineResult fd_refine(const ClauseSet& s, FDefSystem fdefs, SatService& sat);

enum class CondStatus { Holds, Fails, Timeout };

struct RefinementReport {
  CondStatus cond_a = CondStatus::Timeout;
  Assignment cond_a_witness;  // Y where exists X F holds but F~ is empty
  CondStatus cond_b = CondStatus::Timeout;
  Assignment cond_b_witness;  // Y, X' violating (exists X F & F~(X')) => F(X')
  bool holds() const { return cond_a == CondStatus::Holds && cond_b == CondStatus::Holds; }
  bool timed_out() const {
    return cond_a == CondStatus::Timeout || cond_b == CondStatus::Timeout;
  }
};

// F~ <=syn F per the two 2QBF/SAT conditions; same X, Y declarations.
RefinementReport check_refines(NnfDag& dag, NodeId f_tilde, NodeId f,
                               const std::vector<VarId>& y_vars, SatService& sat);

// GetDefCkt: requires T to be the full output support of Fun_T; result is
// semantically equivalent to Fun_T and passes the syntactic path check.
// `rails_out`, when given, receives the (body, negated body) circuit of each
// defined output, composed over inputs only.
NodeId get_def_ckt(NnfDag& dag, const FDefSystem& fdefs,
                   std::map<VarId, std::pair<NodeId, NodeId>>* rails_out = nullptr);

}  // namespace synkc
