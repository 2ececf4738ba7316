#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synkc/nnf.hpp"

namespace synkc {

// A clause is a sorted, duplicate-free set of literals over X u Y.
using Clause = std::vector<Lit>;

Clause normalize_clause(Clause c);       // sort + dedupe; throws on +/- pair
bool clause_tautological(const Clause&);  // detected before normalize throws

// CNF specification with declared input/output variable sequences. Clause
// indices are stable: cofactoring leaves tombstones so recursion bookkeeping
// (Pos/Neg/S1/S2/S3) can use index sets across restrictions.
class ClauseSet {
 public:
  ClauseSet() = default;
  ClauseSet(std::vector<VarId> x_order, std::vector<VarId> y_vars);

  // Returns the new index, or nullopt when the clause is tautological or a
  // duplicate of a live clause (set semantics at construction).
  std::optional<std::size_t> add_clause(Clause c);

  std::size_t num_slots() const { return clauses_.size(); }
  bool is_live(std::size_t i) const { return clauses_[i].has_value(); }
  const Clause& clause(std::size_t i) const;
  std::vector<std::size_t> live_indices() const;
  std::size_t live_count() const { return live_count_; }
  bool has_empty_clause() const { return empty_clause_; }

  const std::vector<VarId>& x_order() const { return x_order_; }
  const std::vector<VarId>& y_vars() const { return y_vars_; }
  // New X sequence; must be a permutation of the current one.
  void reorder_outputs(const std::vector<VarId>& new_order);

  // Original DIMACS indices for reports; defaults to 0 when unknown.
  int orig_index(VarId v) const;
  void set_orig_index(VarId v, int orig);

  ClauseSet cofactor(VarId v, bool value) const;
  ClauseSet restricted_to(const std::vector<std::size_t>& indices) const;

  std::vector<VarId> output_support() const;  // in x_order sequence
  std::vector<VarId> input_support() const;   // sorted

  // <S> as an NNF DAG: conjunction of clause disjunctions; the empty set is
  // true, a recorded empty clause makes it false. When `prime_outputs` is
  // set, output literals are built on primed copies.
  NodeId to_nnf(NnfDag& dag, bool prime_outputs = false) const;

 private:
  std::vector<std::optional<Clause>> clauses_;
  std::set<Clause> live_set_;
  std::vector<VarId> x_order_;
  std::vector<VarId> y_vars_;
  std::vector<int> orig_of_x_, orig_of_y_;
  std::size_t live_count_ = 0;
  bool empty_clause_ = false;
};

enum class FreeVarPolicy { Universal, Reject };

struct ParseReport {
  std::size_t tautologies_dropped = 0;
  std::size_t duplicates_merged = 0;
  std::vector<std::string> warnings;
};

struct QdimacsResult {
  ClauseSet clauses;
  ParseReport report;
};

// QDIMACS with at most one forall-exists alternation: `a` blocks become
// inputs Y, `e` blocks outputs X in prefix order. Unquantified variables
// follow `policy`.
QdimacsResult parse_qdimacs(std::istream& in, FreeVarPolicy policy = FreeVarPolicy::Universal);
QdimacsResult parse_qdimacs(const std::string& text, FreeVarPolicy policy = FreeVarPolicy::Universal);
QdimacsResult parse_qdimacs_file(const std::string& path,
                                 FreeVarPolicy policy = FreeVarPolicy::Universal);

// Maximally connected components of the clause graph G_S, whose edges link
// clauses sharing an *output* atom (inputs never link clauses).
struct MccPartition {
  std::vector<std::vector<std::size_t>> parts;       // each sorted
  std::vector<std::optional<std::size_t>> clause_to_part;  // indexed by slot
};

MccPartition clause_graph_mccs(const ClauseSet& s);

}  // namespace synkc
