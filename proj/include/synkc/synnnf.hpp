#pragma once

#include <optional>
#include <vector>

#include "synkc/sat_backend.hpp"

namespace synkc {

enum class CheckMethod { Semantic, Syntactic, Auto };
enum class PerIMethod { SyntacticPathCheck, SemanticZeta };

struct PerIVerdict {
  int i = 0;  // 1-based position in the output order
  Outcome unrealizable = Outcome::Timeout;
  PerIMethod method = PerIMethod::SyntacticPathCheck;
};

struct MembershipReport {
  enum class Verdict { In, NotIn, Timeout } verdict = Verdict::Timeout;
  int failing_index = 0;   // NotIn only
  Assignment witness;      // satisfies zeta at the failing index
  std::vector<PerIVerdict> per_i;
};

struct UnrealizableResult {
  Outcome unrealizable = Outcome::Timeout;
  Assignment witness;  // zeta model when realizable
};

// Reduct computation and membership analysis for one specification root,
// with respect to an explicit output sequence. Reducts are cached; per-i
// checks are independent and share the read-only arena.
class SynAnalysis {
 public:
  SynAnalysis(NnfDag& dag, NodeId root, std::vector<VarId> order);
  // Declared full output order x_1..x_n.
  static std::vector<VarId> full_order(const NnfDag& dag);

  NnfDag& dag() { return *dag_; }
  NodeId original() const { return root_; }
  const std::vector<VarId>& order() const { return order_; }
  int n() const { return static_cast<int>(order_.size()); }

  NodeId fhat();
  NodeId reduct(int i);              // 1 <= i <= n+1
  NodeId alpha(int i, int j, int k);  // j,k in {0,1}

  UnrealizableResult is_and_unrealizable(int i, SatService& sat);
  MembershipReport check_membership(CheckMethod method, SatService& sat);

  // Sufficient syntactic condition on the DAG of the i-th reduct: no pair of
  // paths from x_i and bar x_i meeting for the first time at an And node.
  // Returns the first failing And node, if any.
  std::optional<NodeId> syntactic_fail_node(int i);

 private:
  Binding bars_to_negations(int from_pos);  // bar x_p -> ~x_p for p >= from_pos

  NnfDag* dag_;
  NodeId root_;
  std::vector<VarId> order_;
  std::optional<NodeId> fhat_;
  std::vector<std::optional<NodeId>> reducts_;  // index i, 1..n+1
};

// Syntactic subclass validators (dDNNF determinism is checked semantically,
// per Or node, via SAT).
bool check_dnnf(const NnfDag& dag, NodeId root);
bool check_wdnnf(const NnfDag& dag, NodeId root);
Outcome check_ddnnf(NnfDag& dag, NodeId root, SatService& sat);

}  // namespace synkc
