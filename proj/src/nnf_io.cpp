#include "synkc/nnf_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace synkc {

std::vector<NnfFileVar> default_file_vars(const VarDecl& decl) {
  std::vector<NnfFileVar> vars;
  for (std::uint32_t i = 1; i <= decl.n_outputs; ++i)
    vars.push_back({out_var(i), static_cast<int>(i), static_cast<int>(i)});
  for (std::uint32_t j = 1; j <= decl.m_inputs; ++j)
    vars.push_back({in_var(j), static_cast<int>(decl.n_outputs + j),
                    static_cast<int>(decl.n_outputs + j)});
  return vars;
}

NnfFile read_nnf(std::istream& in, NnfDag& dag) {
  struct RawNode {
    char tag;
    std::vector<long> nums;
    std::size_t lineno;
  };
  std::vector<RawNode> raw;
  std::vector<std::pair<std::string, std::size_t>> root_decls;
  std::vector<std::tuple<int, VarKind, int>> var_decls;  // (file id, kind, orig)
  bool have_header = false;
  long header_nodes = 0, header_vars = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream is(line);
    std::string tok;
    if (!(is >> tok)) continue;
    if (tok == "c") {
      std::string what;
      if (is >> what) {
        if (what == "root") {
          std::string name;
          long id;
          if (!(is >> name >> id) || id < 0)
            throw Error("nnf: malformed root comment at line " + std::to_string(lineno));
          root_decls.emplace_back(name, static_cast<std::size_t>(id));
        } else if (what == "var") {
          int fid, orig;
          std::string kind;
          if (!(is >> fid >> kind >> orig) || fid <= 0 ||
              (kind != "input" && kind != "output"))
            throw Error("nnf: malformed var comment at line " + std::to_string(lineno));
          var_decls.emplace_back(fid, kind == "output" ? VarKind::Output : VarKind::Input,
                                 orig);
        }
      }
      continue;
    }
    if (tok == "nnf") {
      long e;
      if (have_header || !(is >> header_nodes >> e >> header_vars) || header_nodes < 0 ||
          header_vars < 0)
        throw Error("nnf: malformed header");
      have_header = true;
      continue;
    }
    if (!have_header) throw Error("nnf: node line before header at line " + std::to_string(lineno));
    if (tok.size() != 1 || (tok[0] != 'L' && tok[0] != 'A' && tok[0] != 'O'))
      throw Error("nnf: unknown node tag '" + tok + "' at line " + std::to_string(lineno));
    RawNode rn{tok[0], {}, lineno};
    long v;
    while (is >> v) rn.nums.push_back(v);
    raw.push_back(std::move(rn));
  }
  if (!have_header) throw Error("nnf: missing header");
  if (static_cast<long>(raw.size()) != header_nodes)
    throw Error("nnf: header declares " + std::to_string(header_nodes) + " nodes, found " +
                std::to_string(raw.size()));

  // Variable table. Undeclared file vars default to outputs in ascending id
  // order, with orig index equal to the file id.
  NnfFile file;
  std::map<int, VarId> var_of_fid;
  std::uint32_t n_out = 0, m_in = 0;
  for (const auto& [fid, kind, orig] : var_decls) {
    if (var_of_fid.count(fid)) throw Error("nnf: duplicate var declaration " + std::to_string(fid));
    VarId v = (kind == VarKind::Output) ? out_var(++n_out) : in_var(++m_in);
    var_of_fid[fid] = v;
    file.vars.push_back({v, fid, orig});
  }
  std::vector<int> used_fids;
  for (const auto& rn : raw) {
    if (rn.tag == 'L' && !rn.nums.empty()) {
      long l = rn.nums[0];
      used_fids.push_back(static_cast<int>(l < 0 ? -l : l));
    }
  }
  std::sort(used_fids.begin(), used_fids.end());
  used_fids.erase(std::unique(used_fids.begin(), used_fids.end()), used_fids.end());
  for (int fid : used_fids) {
    if (!var_of_fid.count(fid)) {
      VarId v = out_var(++n_out);
      var_of_fid[fid] = v;
      file.vars.push_back({v, fid, fid});
    }
  }
  file.decl = VarDecl{n_out, m_in};

  dag = NnfDag(file.decl);
  std::vector<NodeId> by_line;
  by_line.reserve(raw.size());
  for (const auto& rn : raw) {
    auto child = [&](long ref) -> NodeId {
      if (ref < 0 || ref >= static_cast<long>(by_line.size()))
        throw Error("nnf: child reference out of range at line " + std::to_string(rn.lineno));
      return by_line[static_cast<std::size_t>(ref)];
    };
    switch (rn.tag) {
      case 'L': {
        if (rn.nums.size() != 1 || rn.nums[0] == 0)
          throw Error("nnf: malformed literal at line " + std::to_string(rn.lineno));
        long l = rn.nums[0];
        int fid = static_cast<int>(l < 0 ? -l : l);
        by_line.push_back(dag.literal(var_of_fid.at(fid), l > 0));
        break;
      }
      case 'A': {
        if (rn.nums.empty() ||
            rn.nums[0] != static_cast<long>(rn.nums.size()) - 1)
          throw Error("nnf: malformed A node at line " + std::to_string(rn.lineno));
        if (rn.nums[0] == 0) {
          by_line.push_back(dag.const_true());
        } else {
          std::vector<NodeId> kids;
          for (std::size_t k = 1; k < rn.nums.size(); ++k) kids.push_back(child(rn.nums[k]));
          by_line.push_back(dag.land(std::move(kids)));
        }
        break;
      }
      case 'O': {
        if (rn.nums.size() < 2 || rn.nums[1] != static_cast<long>(rn.nums.size()) - 2)
          throw Error("nnf: malformed O node at line " + std::to_string(rn.lineno));
        if (rn.nums[1] == 0) {
          by_line.push_back(dag.const_false());
        } else {
          std::vector<NodeId> kids;
          for (std::size_t k = 2; k < rn.nums.size(); ++k) kids.push_back(child(rn.nums[k]));
          by_line.push_back(dag.lor(std::move(kids)));
        }
        break;
      }
    }
  }
  file.node_lines.assign(by_line.begin(), by_line.end());

  if (root_decls.empty()) {
    if (by_line.empty()) throw Error("nnf: no nodes and no roots");
    file.roots.emplace_back("F", by_line.back());  // c2d convention: root is the last node
  } else {
    for (const auto& [name, ln] : root_decls) {
      if (ln >= by_line.size()) throw Error("nnf: root id out of range");
      file.roots.emplace_back(name, by_line[ln]);
    }
  }
  for (const auto& [name, id] : file.roots) dag.roots()[name] = id;
  return file;
}

NnfFile read_nnf_file(const std::string& path, NnfDag& dag) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_nnf(in, dag);
}

void write_nnf(std::ostream& out, const NnfDag& dag,
               const std::vector<std::pair<std::string, NodeId>>& roots,
               const std::vector<NnfFileVar>& vars) {
  std::map<VarId, int> fid;
  for (const auto& v : vars) {
    if (v.var.kind == VarKind::BarOutput || v.var.primed)
      throw Error("nnf: bar/primed variables are internal and cannot be serialized");
    if (!fid.emplace(v.var, v.file_id).second) throw Error("nnf: duplicate variable");
  }
  std::vector<NodeId> root_ids;
  root_ids.reserve(roots.size());
  for (const auto& [name, id] : roots) root_ids.push_back(id);
  std::vector<NodeId> order = dag.reachable(root_ids);

  std::size_t edges = 0;
  for (NodeId id : order) edges += dag.node(id).children.size();
  out << "nnf " << order.size() << " " << edges << " " << vars.size() << "\n";
  for (const auto& v : vars) {
    out << "c var " << v.file_id << " "
        << (v.var.kind == VarKind::Output ? "output" : "input") << " " << v.orig_index
        << "\n";
  }
  std::unordered_map<NodeId, std::size_t> line_of;
  line_of.reserve(order.size());
  for (std::size_t ln = 0; ln < order.size(); ++ln) {
    NodeId id = order[ln];
    line_of[id] = ln;
    const NnfNode& n = dag.node(id);
    switch (n.kind) {
      case NodeKind::True: out << "A 0\n"; break;
      case NodeKind::False: out << "O 0 0\n"; break;
      case NodeKind::Literal: {
        auto it = fid.find(n.var);
        if (it == fid.end())
          throw Error("nnf: variable " + to_string(n.var) + " not declared for output");
        out << "L " << (n.polarity ? it->second : -it->second) << "\n";
        break;
      }
      case NodeKind::And:
      case NodeKind::Or: {
        if (n.kind == NodeKind::And)
          out << "A " << n.children.size();
        else
          out << "O 0 " << n.children.size();
        for (NodeId c : n.children) out << " " << line_of.at(c);
        out << "\n";
        break;
      }
    }
  }
  for (const auto& [name, id] : roots) out << "c root " << name << " " << line_of.at(id) << "\n";
}

NodeId import_dag(NnfDag& dst, const NnfDag& src, NodeId root,
                  const std::map<VarId, VarId>& var_map) {
  std::vector<NodeId> order = src.reachable(std::span<const NodeId>(&root, 1));
  std::unordered_map<NodeId, NodeId> img;
  img.reserve(order.size());
  for (NodeId id : order) {
    const NnfNode& n = src.node(id);
    NodeId r = dst.const_false();
    switch (n.kind) {
      case NodeKind::False: r = dst.const_false(); break;
      case NodeKind::True: r = dst.const_true(); break;
      case NodeKind::Literal: {
        auto it = var_map.find(n.var);
        r = dst.literal(it == var_map.end() ? n.var : it->second, n.polarity);
        break;
      }
      case NodeKind::And:
      case NodeKind::Or: {
        std::vector<NodeId> kids;
        kids.reserve(n.children.size());
        for (NodeId c : n.children) kids.push_back(img.at(c));
        r = (n.kind == NodeKind::And) ? dst.land(std::move(kids)) : dst.lor(std::move(kids));
        break;
      }
    }
    img[id] = r;
  }
  return img.at(root);
}

void write_nnf_file(const std::string& path, const NnfDag& dag,
                    const std::vector<std::pair<std::string, NodeId>>& roots,
                    const std::vector<NnfFileVar>& vars) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_nnf(out, dag, roots, vars);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace synkc
