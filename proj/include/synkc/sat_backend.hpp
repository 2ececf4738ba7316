#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "synkc/nnf.hpp"
#include "synkc/solver.hpp"

namespace synkc {

// One conjunct of a query: a DAG root asserted positively or negated.
struct RootSpec {
  NodeId root;
  bool negated = false;
};

// Timeout is a first-class result, never conflated with Unsat.
enum class Outcome : std::uint8_t { False = 0, True = 1, Timeout = 2 };

struct SatResult {
  enum class Kind : std::uint8_t { Sat, Unsat, Timeout } kind;
  Assignment model;  // over the encoded variables, Sat only
};

struct ForallExistsResult {
  enum class Kind : std::uint8_t { Valid, Counterexample, Timeout } kind;
  Assignment y_witness;  // Counterexample only
  std::int64_t iterations = 0;
};

// Tseitin encoding of NNF roots: one definition literal per reachable node;
// when polarity-aware, only the needed implication directions are emitted.
struct CnfEncoding {
  std::vector<std::vector<sat::Lit>> clauses;
  std::unordered_map<NodeId, sat::Lit> def_map;
  std::map<VarId, sat::Var> input_map;
  int num_vars = 0;
};

CnfEncoding tseitin(const NnfDag& dag, std::span<const RootSpec> roots, bool polarity_aware);

struct SatOptions {
  std::optional<std::string> dump_dir;           // DIMACS dump of every query
  std::optional<double> timeout_seconds;         // wall budget for the whole service
  std::int64_t conflict_budget_per_query = -1;   // <0 = unbounded
};

struct SatStats {
  std::int64_t sat_calls = 0;
  std::int64_t cegar_iterations = 0;
};

// All decision procedures used by the toolkit. One solver instance per query;
// a service object may be shared only by one thread at a time.
class SatService {
 public:
  explicit SatService(SatOptions opts = {});

  SatResult is_sat(NnfDag& dag, std::span<const RootSpec> constraint);
  SatResult is_sat(NnfDag& dag, std::initializer_list<RootSpec> constraint) {
    return is_sat(dag, std::span<const RootSpec>(constraint.begin(), constraint.size()));
  }
  Outcome is_tautology(NnfDag& dag, NodeId root);
  // True iff the root is semantically independent of every variable in vars.
  Outcome semantically_independent(NnfDag& dag, NodeId root, const std::vector<VarId>& vars);
  // forall Y (exists X a_root => exists X' b_root), CEGAR with full-Y blocking.
  ForallExistsResult forall_exists_valid(NnfDag& dag, const std::vector<VarId>& y_vars,
                                         NodeId a_root, NodeId b_root);

  const SatStats& stats() const { return stats_; }
  void start_clock();  // deadline counts from here when timeout_seconds is set
  bool out_of_time() const;

 private:
  friend class ThetaSolver;
  void configure(sat::Solver& s) const;
  void dump(const sat::Solver& s, const std::vector<sat::Lit>& assumptions,
            const std::string& what);

  SatOptions opts_;
  SatStats stats_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  int dump_counter_ = 0;
};

}  // namespace synkc
