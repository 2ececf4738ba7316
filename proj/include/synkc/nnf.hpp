#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "synkc/var.hpp"

namespace synkc {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { False, True, Literal, And, Or };

struct NnfNode {
  NodeKind kind = NodeKind::False;
  bool polarity = true;  // Literal only
  VarId var;             // Literal only
  std::vector<NodeId> children;
};

struct VarDecl {
  std::uint32_t n_outputs = 0;
  std::uint32_t m_inputs = 0;
};

// Value bound to a variable during substitution. `neg` is used for
// negative-polarity occurrences; when absent, negate(pos) is built on demand.
struct Bound {
  NodeId pos = 0;
  std::optional<NodeId> neg;

  Bound() = default;
  explicit Bound(NodeId p) : pos(p) {}
  Bound(NodeId p, NodeId n) : pos(p), neg(n) {}
  friend bool operator==(const Bound&, const Bound&) = default;
};
using Binding = std::map<VarId, Bound>;

// Arena of hash-consed NNF nodes in simplified form. Children ids are always
// strictly smaller than the parent id, so ascending-id order is a valid
// bottom-up order for any transform. The arena is append-only: committed
// nodes are immutable and safe for concurrent reads; node creation must be
// serialized per arena.
class NnfDag {
 public:
  NnfDag();
  explicit NnfDag(VarDecl decl);

  NodeId const_false() const { return 0; }
  NodeId const_true() const { return 1; }
  bool is_const(NodeId id) const { return id <= 1; }

  NodeId literal(VarId v, bool positive = true);
  NodeId literal(const Lit& l) { return literal(l.var, l.positive); }
  // n-ary builders; arity 0 is rejected. Constants are absorbed, duplicate
  // children merged, single-parent same-operator children flattened.
  NodeId land(std::vector<NodeId> kids);
  NodeId lor(std::vector<NodeId> kids);
  NodeId land(NodeId a, NodeId b) { return land(std::vector<NodeId>{a, b}); }
  NodeId lor(NodeId a, NodeId b) { return lor(std::vector<NodeId>{a, b}); }
  // Neutral-tolerant helpers: empty list maps to the operator's unit.
  NodeId conj(std::vector<NodeId> kids);
  NodeId disj(std::vector<NodeId> kids);

  const NnfNode& node(NodeId id) const { return nodes_[id]; }
  std::size_t arena_size() const { return nodes_.size(); }

  bool evaluate(NodeId root, const Assignment& pi) const;
  NodeId positive_form(NodeId root);
  NodeId substitute(NodeId root, const Binding& binding);
  // Returns (image, negated image) built in one pass; the negated image is
  // the De Morgan dual with bound variables mapped through Bound::neg.
  std::pair<NodeId, NodeId> substitute_dual(NodeId root, const Binding& binding);
  NodeId negate(NodeId root);

  // Reachable node ids from the given roots, ascending.
  std::vector<NodeId> reachable(std::span<const NodeId> roots) const;
  std::size_t size(std::span<const NodeId> roots) const;
  std::size_t size(NodeId root) const;
  std::vector<VarId> support(NodeId root) const;  // sorted, unique
  std::vector<VarId> support(std::span<const NodeId> roots) const;

  VarDecl& var_decl() { return decl_; }
  const VarDecl& var_decl() const { return decl_; }
  std::map<std::string, NodeId>& roots() { return roots_; }
  const std::map<std::string, NodeId>& roots() const { return roots_; }

  std::string to_text(NodeId root) const;  // flat expression dump, for humans

 private:
  struct SubstKey {
    NodeId root;
    bool dual;
    std::vector<std::pair<VarId, Bound>> items;  // sorted by var
    friend bool operator==(const SubstKey&, const SubstKey&) = default;
  };
  struct SubstKeyHash {
    std::size_t operator()(const SubstKey& k) const;
  };

  NodeId intern(NnfNode n);
  NodeId build_nary(NodeKind op, std::vector<NodeId> kids);
  std::uint64_t node_hash(const NnfNode& n) const;
  bool node_equal(const NnfNode& a, const NnfNode& b) const;
  std::pair<NodeId, NodeId> substitute_impl(NodeId root, const Binding& binding, bool want_dual);

  std::vector<NnfNode> nodes_;
  std::vector<std::uint32_t> use_count_;
  std::unordered_map<std::uint64_t, std::vector<NodeId>> index_;
  std::unordered_map<SubstKey, std::pair<NodeId, NodeId>, SubstKeyHash> subst_cache_;
  std::unordered_map<NodeId, NodeId> positive_form_cache_;
  VarDecl decl_;
  std::map<std::string, NodeId> roots_;
};

}  // namespace synkc
