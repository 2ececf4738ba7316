#pragma once

#include <cstdint>
#include <vector>

#include "synkc/refine.hpp"
#include "synkc/skolem.hpp"

namespace synkc {

struct CompileOptions {
  int gacks_cap = 64;          // skip the GACKS attempt above this |Out| at level > 0
  bool always_try_gacks = false;
};

struct CompileStats {
  std::int64_t branches = 0;
  std::int64_t gacks_attempts = 0;
  std::int64_t gacks_exits = 0;
  std::int64_t defckt_exits = 0;
  std::int64_t degenerate_exits = 0;
  int max_level = 0;
  bool stage2 = false;  // at least one recursive call was made
};

enum class ProvTag : std::uint8_t { Degenerate, DefCkt, GacksExact, Branch };

struct CompileResult {
  enum class Status { Ok, Timeout } status = Status::Ok;
  NodeId root = 0;
  std::vector<std::pair<NodeId, ProvTag>> certificate;  // sub-result roots, recursion order
  CompileStats stats;
};

// Recursive refining CNF -> SynNNF compiler. The result DAG lives in `dag`,
// passes the syntactic membership check and refines <S> w.r.t. synthesis.
CompileResult compile(NnfDag& dag, const ClauseSet& s, SatService& sat,
                      const CompileOptions& opts = {});

// Static Jeroslow-Wang style score standing in for the VSIDS rank: sum of
// 2^-|C| over clauses containing the variable in either polarity. Ties break
// to the lowest output index. Exact integer arithmetic keeps runs portable.
VarId choose_output_var(const ClauseSet& s, const std::vector<VarId>& candidates);

struct BranchPartition {
  std::vector<std::size_t> s1, s2, s3;  // clause indices; s1/s2 may overlap
};

// S1: clauses MCC-connected to an occurrence of x; S2: to ~x; S3: the rest.
BranchPartition branch_partition(const ClauseSet& s, VarId x);

}  // namespace synkc
