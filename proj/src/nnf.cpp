#include "synkc/nnf.hpp"

#include <algorithm>
#include <sstream>

namespace synkc {

std::string to_string(const VarId& v) {
  std::string s;
  switch (v.kind) {
    case VarKind::Output: s = "x"; break;
    case VarKind::Input: s = "y"; break;
    case VarKind::BarOutput: s = "xbar"; break;
  }
  s += std::to_string(v.index);
  if (v.primed) s += "'";
  return s;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

NnfDag::NnfDag() : NnfDag(VarDecl{}) {}

NnfDag::NnfDag(VarDecl decl) : decl_(decl) {
  NnfNode f, t;
  f.kind = NodeKind::False;
  t.kind = NodeKind::True;
  nodes_.push_back(std::move(f));
  nodes_.push_back(std::move(t));
  use_count_.assign(2, 0);
}

std::uint64_t NnfDag::node_hash(const NnfNode& n) const {
  std::uint64_t h = static_cast<std::uint64_t>(n.kind) * 0x517cc1b727220a95ULL;
  if (n.kind == NodeKind::Literal) {
    h = mix(h, n.var.pack());
    h = mix(h, n.polarity ? 1 : 2);
  }
  for (NodeId c : n.children) h = mix(h, c);
  return h;
}

bool NnfDag::node_equal(const NnfNode& a, const NnfNode& b) const {
  if (a.kind != b.kind) return false;
  if (a.kind == NodeKind::Literal) return a.var == b.var && a.polarity == b.polarity;
  return a.children == b.children;
}

NodeId NnfDag::intern(NnfNode n) {
  std::uint64_t h = node_hash(n);
  auto& bucket = index_[h];
  for (NodeId id : bucket) {
    if (node_equal(nodes_[id], n)) return id;
  }
  NodeId id = static_cast<NodeId>(nodes_.size());
  for (NodeId c : n.children) use_count_[c]++;
  nodes_.push_back(std::move(n));
  use_count_.push_back(0);
  bucket.push_back(id);
  return id;
}

NodeId NnfDag::literal(VarId v, bool positive) {
  if (v.index == 0) throw Error("literal: variable index must be positive");
  NnfNode n;
  n.kind = NodeKind::Literal;
  n.var = v;
  n.polarity = positive;
  return intern(std::move(n));
}

NodeId NnfDag::build_nary(NodeKind op, std::vector<NodeId> kids) {
  if (kids.empty()) throw Error("and/or: arity 0 rejected");
  const NodeId absorbing = (op == NodeKind::And) ? const_false() : const_true();
  const NodeId neutral = (op == NodeKind::And) ? const_true() : const_false();
  std::vector<NodeId> flat;
  flat.reserve(kids.size());
  for (NodeId k : kids) {
    if (k >= nodes_.size()) throw Error("and/or: unknown child id");
    if (k == absorbing) return absorbing;
    if (k == neutral) continue;
    // Flatten a same-operator child only when this would be its sole parent,
    // so sharing is never broken.
    if (nodes_[k].kind == op && use_count_[k] == 0) {
      for (NodeId g : nodes_[k].children) flat.push_back(g);
    } else {
      flat.push_back(k);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return neutral;
  if (flat.size() == 1) return flat[0];
  NnfNode n;
  n.kind = op;
  n.children = std::move(flat);
  return intern(std::move(n));
}

NodeId NnfDag::land(std::vector<NodeId> kids) { return build_nary(NodeKind::And, std::move(kids)); }
NodeId NnfDag::lor(std::vector<NodeId> kids) { return build_nary(NodeKind::Or, std::move(kids)); }

NodeId NnfDag::conj(std::vector<NodeId> kids) {
  return kids.empty() ? const_true() : land(std::move(kids));
}
NodeId NnfDag::disj(std::vector<NodeId> kids) {
  return kids.empty() ? const_false() : lor(std::move(kids));
}

std::vector<NodeId> NnfDag::reachable(std::span<const NodeId> roots) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<NodeId> stack;
  for (NodeId r : roots) {
    if (r >= nodes_.size()) throw Error("reachable: unknown root id");
    if (!seen[r]) {
      seen[r] = true;
      stack.push_back(r);
    }
  }
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    for (NodeId c : nodes_[id].children) {
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (seen[id]) out.push_back(id);
  }
  return out;
}

std::size_t NnfDag::size(std::span<const NodeId> roots) const { return reachable(roots).size(); }
std::size_t NnfDag::size(NodeId root) const { return size(std::span<const NodeId>(&root, 1)); }

std::vector<VarId> NnfDag::support(std::span<const NodeId> roots) const {
  std::vector<VarId> vars;
  for (NodeId id : reachable(roots)) {
    if (nodes_[id].kind == NodeKind::Literal) vars.push_back(nodes_[id].var);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::vector<VarId> NnfDag::support(NodeId root) const {
  return support(std::span<const NodeId>(&root, 1));
}

bool NnfDag::evaluate(NodeId root, const Assignment& pi) const {
  std::vector<NodeId> order = reachable(std::span<const NodeId>(&root, 1));
  std::vector<std::uint8_t> val(nodes_.size(), 0);
  for (NodeId id : order) {
    const NnfNode& n = nodes_[id];
    switch (n.kind) {
      case NodeKind::False: val[id] = 0; break;
      case NodeKind::True: val[id] = 1; break;
      case NodeKind::Literal: {
        bool b = pi.get(n.var);
        val[id] = (b == n.polarity) ? 1 : 0;
        break;
      }
      case NodeKind::And: {
        std::uint8_t v = 1;
        for (NodeId c : n.children) v &= val[c];
        val[id] = v;
        break;
      }
      case NodeKind::Or: {
        std::uint8_t v = 0;
        for (NodeId c : n.children) v |= val[c];
        val[id] = v;
        break;
      }
    }
  }
  return val[root] != 0;
}

NodeId NnfDag::positive_form(NodeId root) {
  auto hit = positive_form_cache_.find(root);
  if (hit != positive_form_cache_.end()) return hit->second;
  std::vector<NodeId> order = reachable(std::span<const NodeId>(&root, 1));
  std::unordered_map<NodeId, NodeId> img;
  img.reserve(order.size());
  for (NodeId id : order) {
    const NnfNode& n = nodes_[id];
    NodeId r = id;
    switch (n.kind) {
      case NodeKind::False:
      case NodeKind::True:
        break;
      case NodeKind::Literal:
        if (n.var.kind == VarKind::Output && !n.polarity) {
          VarId bar = n.var;
          bar.kind = VarKind::BarOutput;
          r = literal(bar, true);
        } else {
          r = id;
        }
        break;
      case NodeKind::And:
      case NodeKind::Or: {
        std::vector<NodeId> kids;
        kids.reserve(n.children.size());
        for (NodeId c : n.children) kids.push_back(img.at(c));
        r = (n.kind == NodeKind::And) ? land(std::move(kids)) : lor(std::move(kids));
        break;
      }
    }
    img[id] = r;
  }
  NodeId result = img.at(root);
  positive_form_cache_.emplace(root, result);
  return result;
}

std::size_t NnfDag::SubstKeyHash::operator()(const SubstKey& k) const {
  std::uint64_t h = mix(k.root, k.dual ? 0x2545f4914f6cdd1dULL : 17);
  for (const auto& [v, b] : k.items) {
    h = mix(h, v.pack());
    h = mix(h, b.pos);
    h = mix(h, b.neg ? static_cast<std::uint64_t>(*b.neg) + 2 : 1);
  }
  return static_cast<std::size_t>(h);
}

std::pair<NodeId, NodeId> NnfDag::substitute_impl(NodeId root, const Binding& binding,
                                                  bool want_dual) {
  SubstKey key{root, want_dual, {binding.begin(), binding.end()}};
  auto hit = subst_cache_.find(key);
  if (hit != subst_cache_.end()) return hit->second;

  std::vector<NodeId> order = reachable(std::span<const NodeId>(&root, 1));
  std::unordered_map<NodeId, std::pair<NodeId, NodeId>> img;
  img.reserve(order.size());
  const NodeId none = const_false();  // dual slot unused when !want_dual
  for (NodeId id : order) {
    const NnfNode& n = nodes_[id];
    std::pair<NodeId, NodeId> r{id, none};
    switch (n.kind) {
      case NodeKind::False:
        r = {const_false(), const_true()};
        break;
      case NodeKind::True:
        r = {const_true(), const_false()};
        break;
      case NodeKind::Literal: {
        auto b = binding.find(n.var);
        if (b == binding.end()) {
          r.first = id;
          if (want_dual) r.second = literal(n.var, !n.polarity);
        } else {
          NodeId pos = b->second.pos;
          NodeId neg = b->second.neg ? *b->second.neg : negate(pos);
          r.first = n.polarity ? pos : neg;
          if (want_dual) r.second = n.polarity ? neg : pos;
        }
        break;
      }
      case NodeKind::And:
      case NodeKind::Or: {
        std::vector<NodeId> kids, dual_kids;
        kids.reserve(n.children.size());
        if (want_dual) dual_kids.reserve(n.children.size());
        for (NodeId c : n.children) {
          const auto& ci = img.at(c);
          kids.push_back(ci.first);
          if (want_dual) dual_kids.push_back(ci.second);
        }
        if (n.kind == NodeKind::And) {
          r.first = land(std::move(kids));
          if (want_dual) r.second = lor(std::move(dual_kids));
        } else {
          r.first = lor(std::move(kids));
          if (want_dual) r.second = land(std::move(dual_kids));
        }
        break;
      }
    }
    img[id] = r;
  }
  auto result = img.at(root);
  subst_cache_.emplace(std::move(key), result);
  return result;
}

NodeId NnfDag::substitute(NodeId root, const Binding& binding) {
  return substitute_impl(root, binding, false).first;
}

std::pair<NodeId, NodeId> NnfDag::substitute_dual(NodeId root, const Binding& binding) {
  return substitute_impl(root, binding, true);
}

NodeId NnfDag::negate(NodeId root) { return substitute_impl(root, {}, true).second; }

std::string NnfDag::to_text(NodeId root) const {
  const NnfNode& n = nodes_[root];
  switch (n.kind) {
    case NodeKind::False: return "0";
    case NodeKind::True: return "1";
    case NodeKind::Literal:
      return (n.polarity ? "" : "~") + to_string(n.var);
    case NodeKind::And:
    case NodeKind::Or: {
      std::ostringstream os;
      os << "(";
      const char* sep = "";
      const char* op = (n.kind == NodeKind::And) ? " & " : " | ";
      for (NodeId c : n.children) {
        os << sep << to_text(c);
        sep = op;
      }
      os << ")";
      return os.str();
    }
  }
  return "?";
}

}  // namespace synkc
