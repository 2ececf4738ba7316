#include "synkc/oracle.hpp"

#include <algorithm>

namespace synkc {

TruthTable::TruthTable(std::vector<VarId> support) : support_(std::move(support)) {
  if (support_.size() > kMaxVars) throw Error("truth table support exceeds 22 variables");
  bits_.assign((num_rows() + 63) / 64, 0);
}

void TruthTable::set(std::uint64_t idx, bool v) {
  if (v)
    bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
  else
    bits_[idx >> 6] &= ~(std::uint64_t{1} << (idx & 63));
}

std::uint64_t TruthTable::row_of(const Assignment& pi) const {
  std::uint64_t idx = 0;
  for (VarId v : support_) idx = (idx << 1) | (pi.get(v) ? 1 : 0);
  return idx;
}

Assignment TruthTable::assignment_of(std::uint64_t idx) const {
  Assignment pi;
  std::size_t k = support_.size();
  for (std::size_t p = 0; p < k; ++p)
    pi.set(support_[p], (idx >> (k - 1 - p)) & 1);
  return pi;
}

TruthTable TruthTable::of(const NnfDag& dag, NodeId root) {
  return of(dag, root, dag.support(root));
}

TruthTable TruthTable::of(const NnfDag& dag, NodeId root, std::vector<VarId> support) {
  TruthTable tt(std::move(support));
  {
    std::vector<VarId> actual = dag.support(root);
    std::vector<VarId> sorted = tt.support_;
    std::sort(sorted.begin(), sorted.end());
    for (VarId v : actual)
      if (!std::binary_search(sorted.begin(), sorted.end(), v))
        throw Error("truth table support does not cover the root");
  }
  const std::size_t k = tt.support_.size();
  std::vector<NodeId> order = dag.reachable(std::span<const NodeId>(&root, 1));
  std::vector<std::uint64_t> word(dag.arena_size(), 0);
  const std::uint64_t rows = tt.num_rows();
  // blockwise bit-parallel evaluation, 64 assignments at a time
  for (std::uint64_t base = 0; base < rows; base += 64) {
    for (NodeId id : order) {
      const NnfNode& n = dag.node(id);
      std::uint64_t w = 0;
      switch (n.kind) {
        case NodeKind::False: w = 0; break;
        case NodeKind::True: w = ~std::uint64_t{0}; break;
        case NodeKind::Literal: {
          std::size_t pos = 0;
          while (pos < k && tt.support_[pos] != n.var) ++pos;
          std::size_t shift = k - 1 - pos;  // bit position within the row index
          if (shift >= 6) {
            w = ((base >> shift) & 1) ? ~std::uint64_t{0} : 0;
          } else {
            // pattern with period 2^(shift+1) inside the 64-bit block
            std::uint64_t stripe = 0;
            for (std::uint64_t r = 0; r < 64; ++r)
              if ((r >> shift) & 1) stripe |= std::uint64_t{1} << r;
            w = stripe;
          }
          if (!n.polarity) w = ~w;
          break;
        }
        case NodeKind::And: {
          w = ~std::uint64_t{0};
          for (NodeId c : n.children) w &= word[c];
          break;
        }
        case NodeKind::Or: {
          w = 0;
          for (NodeId c : n.children) w |= word[c];
          break;
        }
      }
      word[id] = w;
    }
    std::uint64_t w = word[root];
    if (rows - base < 64) w &= (std::uint64_t{1} << (rows - base)) - 1;
    tt.bits_[base >> 6] = w;
  }
  return tt;
}

TruthTable TruthTable::exists(const std::vector<VarId>& vars) const {
  TruthTable out = *this;
  const std::size_t k = support_.size();
  for (VarId v : vars) {
    std::size_t pos = 0;
    while (pos < k && support_[pos] != v) ++pos;
    if (pos == k) throw Error("exists: variable not in support");
    std::uint64_t stride = std::uint64_t{1} << (k - 1 - pos);
    for (std::uint64_t idx = 0; idx < out.num_rows(); ++idx) {
      if (idx & stride) continue;
      bool v0 = out.value(idx), v1 = out.value(idx | stride);
      out.set(idx, v0 || v1);
      out.set(idx | stride, v0 || v1);
    }
  }
  return out;
}

bool TruthTable::is_constant(bool v) const {
  for (std::uint64_t idx = 0; idx < num_rows(); ++idx)
    if (value(idx) != v) return false;
  return true;
}

bool tt_refines(const TruthTable& f_tilde, const TruthTable& f, const std::vector<VarId>& xs) {
  if (f_tilde.support() != f.support()) throw Error("tt_refines: support mismatch");
  TruthTable ex_f = f.exists(xs);
  TruthTable ex_ft = f_tilde.exists(xs);
  for (std::uint64_t idx = 0; idx < f.num_rows(); ++idx) {
    if (ex_f.value(idx) && !ex_ft.value(idx)) return false;        // condition (a)
    if (ex_f.value(idx) && f_tilde.value(idx) && !f.value(idx)) return false;  // (b)
  }
  return true;
}

bool tt_skolem_correct(const TruthTable& f, const std::vector<VarId>& xs,
                       const std::vector<TruthTable>& psi) {
  if (psi.size() != xs.size()) throw Error("tt_skolem_correct: arity mismatch");
  const auto& sup = f.support();
  std::vector<std::size_t> x_pos;
  for (VarId x : xs) {
    std::size_t pos = 0;
    while (pos < sup.size() && sup[pos] != x) ++pos;
    if (pos == sup.size()) throw Error("tt_skolem_correct: x not in support");
    x_pos.push_back(pos);
  }
  TruthTable ex_f = f.exists(xs);
  const std::size_t k = sup.size();
  for (std::uint64_t idx = 0; idx < f.num_rows(); ++idx) {
    if (!ex_f.value(idx)) continue;
    std::uint64_t at_psi = idx;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      std::uint64_t bit = std::uint64_t{1} << (k - 1 - x_pos[j]);
      if (psi[j].value(idx))
        at_psi |= bit;
      else
        at_psi &= ~bit;
    }
    // psi tables must not depend on X; evaluate them at the patched row too
    if (!f.value(at_psi)) return false;
  }
  return true;
}

NodeId gen_family(NnfDag& dag, const std::vector<NodeId>& subfns,
                  const std::vector<FamilyOpPrime>& opprime, const std::vector<FamilyOp>& op) {
  const std::size_t n = opprime.size();
  if (subfns.size() != n + 1 || op.size() != n)
    throw Error("gen_family: need n op', n op and n+1 subfunctions");
  NodeId acc = 0;
  bool have_acc = false;
  auto combine = [&](FamilyOp o, NodeId term) {
    if (!have_acc) {
      acc = term;
      have_acc = true;
    } else {
      acc = (o == FamilyOp::And) ? dag.land(acc, term) : dag.lor(acc, term);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    NodeId x = dag.literal(out_var(static_cast<std::uint32_t>(i + 1)), true);
    NodeId nx = dag.literal(out_var(static_cast<std::uint32_t>(i + 1)), false);
    NodeId f = subfns[i];
    NodeId term = dag.const_false();
    switch (opprime[i]) {
      case FamilyOpPrime::And: term = dag.land(x, f); break;
      case FamilyOpPrime::Or: term = dag.lor(x, f); break;
      case FamilyOpPrime::Xor:
        term = dag.lor(dag.land(x, dag.negate(f)), dag.land(nx, f));
        break;
    }
    if (i == 0) {
      combine(FamilyOp::And, term);  // first term seeds the accumulator
    } else {
      combine(op[i - 1], term);
    }
  }
  combine(op[n - 1], subfns[n]);
  return acc;
}

NodeId gen_random_nnf(NnfDag& dag, const RandomNnfParams& p, std::mt19937_64& rng) {
  std::vector<NodeId> pool;
  auto rnd = [&](std::uint64_t m) { return static_cast<std::uint32_t>(rng() % m); };
  for (std::uint32_t i = 1; i <= p.n_outputs; ++i) {
    pool.push_back(dag.literal(out_var(i), true));
    pool.push_back(dag.literal(out_var(i), false));
  }
  for (std::uint32_t j = 1; j <= p.m_inputs; ++j) {
    pool.push_back(dag.literal(in_var(j), true));
    pool.push_back(dag.literal(in_var(j), false));
  }
  for (int t = 0; t < p.internal_nodes; ++t) {
    int arity = 2 + static_cast<int>(rnd(static_cast<std::uint64_t>(p.max_arity - 1)));
    std::vector<NodeId> kids;
    for (int a = 0; a < arity; ++a) kids.push_back(pool[rnd(pool.size())]);
    NodeId nd = (rng() & 1) ? dag.land(std::move(kids)) : dag.lor(std::move(kids));
    pool.push_back(nd);
  }
  return pool.back();
}

NodeId gen_random_nnf_over(NnfDag& dag, const std::vector<VarId>& vars, int internal_nodes,
                           std::mt19937_64& rng) {
  if (vars.empty()) return (rng() & 1) ? dag.const_true() : dag.const_false();
  std::vector<NodeId> pool;
  for (VarId v : vars) {
    pool.push_back(dag.literal(v, true));
    pool.push_back(dag.literal(v, false));
  }
  for (int t = 0; t < internal_nodes; ++t) {
    std::vector<NodeId> kids{pool[rng() % pool.size()], pool[rng() % pool.size()]};
    NodeId nd = (rng() & 1) ? dag.land(std::move(kids)) : dag.lor(std::move(kids));
    pool.push_back(nd);
  }
  return pool.back();
}

ClauseSet gen_random_cnf(const RandomCnfParams& p, std::mt19937_64& rng) {
  std::vector<VarId> xs, ys;
  for (std::uint32_t i = 1; i <= p.n_outputs; ++i) xs.push_back(out_var(i));
  for (std::uint32_t j = 1; j <= p.m_inputs; ++j) ys.push_back(in_var(j));
  ClauseSet s(xs, ys);
  std::vector<VarId> all = xs;
  all.insert(all.end(), ys.begin(), ys.end());
  auto rnd = [&](std::uint64_t m) { return static_cast<std::size_t>(rng() % m); };
  for (int c = 0; c < p.clauses; ++c) {
    int width = 1 + static_cast<int>(rnd(static_cast<std::uint64_t>(p.max_width)));
    Clause cl;
    for (int k = 0; k < width; ++k)
      cl.push_back(Lit{all[rnd(all.size())], (rng() & 1) != 0});
    if (clause_tautological(cl)) {
      --c;  // retry, keep the clause count honest
      continue;
    }
    s.add_clause(std::move(cl));
  }
  return s;
}

}  // namespace synkc
