#include "synkc/synnnf.hpp"

#include <algorithm>
#include <unordered_map>

namespace synkc {

SynAnalysis::SynAnalysis(NnfDag& dag, NodeId root, std::vector<VarId> order)
    : dag_(&dag), root_(root), order_(std::move(order)) {
  for (VarId v : order_) {
    if (v.kind != VarKind::Output || v.primed)
      throw Error("analysis order must list unprimed output variables");
  }
  reducts_.assign(order_.size() + 2, std::nullopt);
}

std::vector<VarId> SynAnalysis::full_order(const NnfDag& dag) {
  std::vector<VarId> order;
  for (std::uint32_t i = 1; i <= dag.var_decl().n_outputs; ++i) order.push_back(out_var(i));
  return order;
}

NodeId SynAnalysis::fhat() {
  if (!fhat_) fhat_ = dag_->positive_form(root_);
  return *fhat_;
}

NodeId SynAnalysis::reduct(int i) {
  if (i < 1 || i > n() + 1) throw Error("reduct index out of range");
  if (reducts_[i]) return *reducts_[i];
  NodeId r;
  if (i == 1) {
    r = fhat();
  } else {
    // Delta_i F = Delta_{i-1} F [x_{i-1} -> 1, bar x_{i-1} -> 1]
    VarId x = order_[i - 2];
    Binding b;
    b[x] = Bound{dag_->const_true(), dag_->const_false()};
    b[bar_var(x.index)] = Bound{dag_->const_true(), dag_->const_false()};
    r = dag_->substitute(reduct(i - 1), b);
  }
  reducts_[i] = r;
  return r;
}

Binding SynAnalysis::bars_to_negations(int from_pos) {
  Binding b;
  for (int p = from_pos; p <= n(); ++p) {
    VarId x = order_[p - 1];
    b[bar_var(x.index)] =
        Bound{dag_->literal(x, false), dag_->literal(x, true)};
  }
  return b;
}

NodeId SynAnalysis::alpha(int i, int j, int k) {
  if (i < 1 || i > n()) throw Error("alpha index out of range");
  VarId x = order_[i - 1];
  Binding b = bars_to_negations(i + 1);
  b[x] = Bound{j ? dag_->const_true() : dag_->const_false(),
               j ? dag_->const_false() : dag_->const_true()};
  b[bar_var(x.index)] = Bound{k ? dag_->const_true() : dag_->const_false(),
                              k ? dag_->const_false() : dag_->const_true()};
  return dag_->substitute(reduct(i), b);
}

UnrealizableResult SynAnalysis::is_and_unrealizable(int i, SatService& sat) {
  NodeId a11 = alpha(i, 1, 1);
  NodeId a10 = alpha(i, 1, 0);
  NodeId a01 = alpha(i, 0, 1);
  SatResult zeta = sat.is_sat(
      *dag_, {RootSpec{a11, false}, RootSpec{a10, true}, RootSpec{a01, true}});
  switch (zeta.kind) {
    case SatResult::Kind::Unsat:
      return {Outcome::True, {}};
    case SatResult::Kind::Sat:
      return {Outcome::False, std::move(zeta.model)};
    default:
      return {Outcome::Timeout, {}};
  }
}

std::optional<NodeId> SynAnalysis::syntactic_fail_node(int i) {
  NodeId r = reduct(i);
  VarId x = order_[i - 1];
  VarId xb = bar_var(x.index);
  std::vector<NodeId> order = dag_->reachable(std::span<const NodeId>(&r, 1));
  std::unordered_map<NodeId, std::uint8_t> reach;  // bit0 = from x_i, bit1 = from bar x_i
  reach.reserve(order.size());
  for (NodeId id : order) {
    const NnfNode& nd = dag_->node(id);
    std::uint8_t bits = 0;
    if (nd.kind == NodeKind::Literal) {
      if (nd.var == x) bits |= 1;
      if (nd.var == xb) bits |= 2;
    } else {
      int with_x = 0, with_bar = 0;
      NodeId only_x = 0, only_bar = 0;
      for (NodeId c : nd.children) {
        std::uint8_t cb = reach.at(c);
        bits |= cb;
        if (cb & 1) {
          ++with_x;
          only_x = c;
        }
        if (cb & 2) {
          ++with_bar;
          only_bar = c;
        }
      }
      if (nd.kind == NodeKind::And && with_x > 0 && with_bar > 0 &&
          !(with_x == 1 && with_bar == 1 && only_x == only_bar)) {
        return id;  // two distinct children bring x_i and bar x_i together here
      }
    }
    reach[id] = bits;
  }
  return std::nullopt;
}

MembershipReport SynAnalysis::check_membership(CheckMethod method, SatService& sat) {
  MembershipReport report;
  std::vector<int> semantic_todo;
  if (method == CheckMethod::Semantic) {
    for (int i = 1; i <= n(); ++i) semantic_todo.push_back(i);
  } else {
    for (int i = 1; i <= n(); ++i) {
      if (syntactic_fail_node(i)) {
        if (method == CheckMethod::Syntactic) {
          // The syntactic condition is only sufficient; report the failure
          // with the path-check method so callers can distinguish.
          report.per_i.push_back({i, Outcome::False, PerIMethod::SyntacticPathCheck});
          report.verdict = MembershipReport::Verdict::NotIn;
          report.failing_index = i;
          return report;
        }
        semantic_todo.push_back(i);
      } else {
        report.per_i.push_back({i, Outcome::True, PerIMethod::SyntacticPathCheck});
      }
    }
  }
  for (int i : semantic_todo) {
    UnrealizableResult r = is_and_unrealizable(i, sat);
    report.per_i.push_back({i, r.unrealizable, PerIMethod::SemanticZeta});
    if (r.unrealizable == Outcome::False) {
      report.verdict = MembershipReport::Verdict::NotIn;
      report.failing_index = i;
      report.witness = std::move(r.witness);
      std::sort(report.per_i.begin(), report.per_i.end(),
                [](const PerIVerdict& a, const PerIVerdict& b) { return a.i < b.i; });
      return report;
    }
    if (r.unrealizable == Outcome::Timeout) {
      report.verdict = MembershipReport::Verdict::Timeout;
      std::sort(report.per_i.begin(), report.per_i.end(),
                [](const PerIVerdict& a, const PerIVerdict& b) { return a.i < b.i; });
      return report;
    }
  }
  std::sort(report.per_i.begin(), report.per_i.end(),
            [](const PerIVerdict& a, const PerIVerdict& b) { return a.i < b.i; });
  report.verdict = MembershipReport::Verdict::In;
  return report;
}

namespace {

// Literal sets per node as bitsets; bit 2*k is the positive literal of the
// k-th support variable, 2*k+1 the negative one.
struct LitSets {
  std::vector<VarId> vars;
  std::unordered_map<NodeId, std::vector<std::uint64_t>> sets;
  std::size_t words = 0;

  int var_index(VarId v) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    return static_cast<int>(it - vars.begin());
  }
};

LitSets literal_sets(const NnfDag& dag, NodeId root) {
  LitSets ls;
  ls.vars = dag.support(root);
  ls.words = (2 * ls.vars.size() + 63) / 64 + 1;
  std::vector<NodeId> order = dag.reachable(std::span<const NodeId>(&root, 1));
  for (NodeId id : order) {
    const NnfNode& n = dag.node(id);
    std::vector<std::uint64_t> bits(ls.words, 0);
    if (n.kind == NodeKind::Literal) {
      std::size_t b = 2 * ls.var_index(n.var) + (n.polarity ? 0 : 1);
      bits[b / 64] |= std::uint64_t{1} << (b % 64);
    } else {
      for (NodeId c : n.children) {
        const auto& cb = ls.sets.at(c);
        for (std::size_t w = 0; w < ls.words; ++w) bits[w] |= cb[w];
      }
    }
    ls.sets[id] = std::move(bits);
  }
  return ls;
}

bool intersects(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & b[w]) return true;
  return false;
}

std::vector<std::uint64_t> swap_polarity(const std::vector<std::uint64_t>& a) {
  // swap even/odd bit pairs
  std::vector<std::uint64_t> out(a.size());
  const std::uint64_t even = 0x5555555555555555ULL;
  for (std::size_t w = 0; w < a.size(); ++w)
    out[w] = ((a[w] & even) << 1) | ((a[w] >> 1) & even);
  return out;
}

std::vector<std::uint64_t> atoms_of(const std::vector<std::uint64_t>& a) {
  std::vector<std::uint64_t> out(a.size());
  const std::uint64_t even = 0x5555555555555555ULL;
  for (std::size_t w = 0; w < a.size(); ++w) {
    std::uint64_t merged = (a[w] & even) | ((a[w] >> 1) & even);
    out[w] = merged;
  }
  return out;
}

}  // namespace

bool check_dnnf(const NnfDag& dag, NodeId root) {
  LitSets ls = literal_sets(dag, root);
  for (NodeId id : dag.reachable(std::span<const NodeId>(&root, 1))) {
    const NnfNode& n = dag.node(id);
    if (n.kind != NodeKind::And) continue;
    for (std::size_t r = 0; r < n.children.size(); ++r) {
      auto ar = atoms_of(ls.sets.at(n.children[r]));
      for (std::size_t s = r + 1; s < n.children.size(); ++s) {
        if (intersects(ar, atoms_of(ls.sets.at(n.children[s])))) return false;
      }
    }
  }
  return true;
}

bool check_wdnnf(const NnfDag& dag, NodeId root) {
  LitSets ls = literal_sets(dag, root);
  for (NodeId id : dag.reachable(std::span<const NodeId>(&root, 1))) {
    const NnfNode& n = dag.node(id);
    if (n.kind != NodeKind::And) continue;
    for (std::size_t r = 0; r < n.children.size(); ++r) {
      auto flipped = swap_polarity(ls.sets.at(n.children[r]));
      for (std::size_t s = r + 1; s < n.children.size(); ++s) {
        if (intersects(flipped, ls.sets.at(n.children[s]))) return false;
      }
    }
  }
  return true;
}

Outcome check_ddnnf(NnfDag& dag, NodeId root, SatService& sat) {
  if (!check_dnnf(dag, root)) return Outcome::False;
  for (NodeId id : dag.reachable(std::span<const NodeId>(&root, 1))) {
    const NnfNode& n = dag.node(id);
    if (n.kind != NodeKind::Or) continue;
    for (std::size_t r = 0; r < n.children.size(); ++r) {
      for (std::size_t s = r + 1; s < n.children.size(); ++s) {
        SatResult res = sat.is_sat(
            dag, {RootSpec{n.children[r], false}, RootSpec{n.children[s], false}});
        if (res.kind == SatResult::Kind::Sat) return Outcome::False;
        if (res.kind == SatResult::Kind::Timeout) return Outcome::Timeout;
      }
    }
  }
  return Outcome::True;
}

}  // namespace synkc
