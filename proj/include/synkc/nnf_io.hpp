#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "synkc/nnf.hpp"

namespace synkc {

// c2d-style .nnf text format, extended with comment lines
//   c root <name> <id>                  multi-rooted DAGs
//   c var <id> input|output <orig>      X/Y partition, X sequence = line order
// Node lines: `L l` (signed literal), `A c i1..ic`, `O j c i1..ic` (j is
// ignored on input and emitted as 0). `A 0` is true, `O 0 0` is false.
// Node ids are 0-based line order; children always precede parents.

struct NnfFileVar {
  VarId var;       // Output/Input only
  int file_id;     // literal encoding in node lines, 1-based
  int orig_index;  // original (e.g. DIMACS) index carried in comments
};

struct NnfFile {
  VarDecl decl;
  std::vector<NnfFileVar> vars;                         // outputs in X order first
  std::vector<std::pair<std::string, NodeId>> roots;    // in file order
  std::vector<NodeId> node_lines;                       // arena id per file line
};

// Parses into `dag` (which is reset to a fresh arena sized per the file).
NnfFile read_nnf(std::istream& in, NnfDag& dag);
NnfFile read_nnf_file(const std::string& path, NnfDag& dag);

void write_nnf(std::ostream& out, const NnfDag& dag,
               const std::vector<std::pair<std::string, NodeId>>& roots,
               const std::vector<NnfFileVar>& vars);
void write_nnf_file(const std::string& path, const NnfDag& dag,
                    const std::vector<std::pair<std::string, NodeId>>& roots,
                    const std::vector<NnfFileVar>& vars);

// Default numbering when no external ids exist: outputs 1..n, inputs n+1..n+m.
std::vector<NnfFileVar> default_file_vars(const VarDecl& decl);

// Rebuilds src's root inside dst, renaming variables through var_map
// (identity for unmapped variables).
NodeId import_dag(NnfDag& dst, const NnfDag& src, NodeId root,
                  const std::map<VarId, VarId>& var_map);

}  // namespace synkc
