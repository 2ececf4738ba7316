#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "synkc/cnf.hpp"
#include "synkc/nnf.hpp"

namespace synkc {

// Exhaustive reference semantics. Bit order is lexicographic over the
// support order with support[0] the most significant bit. Capped at 22
// variables so every acceptance run stays desk-sized.
class TruthTable {
 public:
  static constexpr std::size_t kMaxVars = 22;

  TruthTable() = default;
  explicit TruthTable(std::vector<VarId> support);

  static TruthTable of(const NnfDag& dag, NodeId root);
  static TruthTable of(const NnfDag& dag, NodeId root, std::vector<VarId> support);

  const std::vector<VarId>& support() const { return support_; }
  std::uint64_t num_rows() const { return std::uint64_t{1} << support_.size(); }
  bool value(std::uint64_t idx) const {
    return (bits_[idx >> 6] >> (idx & 63)) & 1;
  }
  void set(std::uint64_t idx, bool v);
  std::uint64_t row_of(const Assignment& pi) const;
  Assignment assignment_of(std::uint64_t idx) const;

  TruthTable exists(const std::vector<VarId>& vars) const;  // same support
  bool is_constant(bool v) const;
  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::vector<VarId> support_;
  std::vector<std::uint64_t> bits_;
};

// Definition 5 by enumeration: both tables must share the same support.
bool tt_refines(const TruthTable& f_tilde, const TruthTable& f, const std::vector<VarId>& xs);

// forall Y (exists X F => F(Psi(Y), Y)); psi tables share F's support and
// must be independent of the X positions.
bool tt_skolem_correct(const TruthTable& f, const std::vector<VarId>& xs,
                       const std::vector<TruthTable>& psi);

enum class FamilyOp : std::uint8_t { And, Or };
enum class FamilyOpPrime : std::uint8_t { And, Or, Xor };

// Appendix family (x1 op'1 f1) op1 (x2 op'2 f2) ... opn f_{n+1}; xor terms
// are expanded in NNF as (x & ~f) | (~x & f).
NodeId gen_family(NnfDag& dag, const std::vector<NodeId>& subfns,
                  const std::vector<FamilyOpPrime>& opprime, const std::vector<FamilyOp>& op);

// Seeded random instances for property suites.
struct RandomNnfParams {
  std::uint32_t n_outputs = 4;
  std::uint32_t m_inputs = 4;
  int internal_nodes = 12;
  int max_arity = 3;
};
NodeId gen_random_nnf(NnfDag& dag, const RandomNnfParams& p, std::mt19937_64& rng);

// Random NNF over exactly the given variables, both polarities allowed;
// degenerates to a constant when vars is empty.
NodeId gen_random_nnf_over(NnfDag& dag, const std::vector<VarId>& vars, int internal_nodes,
                           std::mt19937_64& rng);

struct RandomCnfParams {
  std::uint32_t n_outputs = 4;
  std::uint32_t m_inputs = 4;
  int clauses = 12;
  int max_width = 4;
};
ClauseSet gen_random_cnf(const RandomCnfParams& p, std::mt19937_64& rng);

}  // namespace synkc
