#include "synkc/cnf.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace synkc {

bool clause_tautological(const Clause& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (c[i].var == c[j].var && c[i].positive != c[j].positive) return true;
  return false;
}

Clause normalize_clause(Clause c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i].var == c[i + 1].var) throw Error("clause contains a variable and its negation");
  return c;
}

ClauseSet::ClauseSet(std::vector<VarId> x_order, std::vector<VarId> y_vars)
    : x_order_(std::move(x_order)), y_vars_(std::move(y_vars)) {
  std::sort(y_vars_.begin(), y_vars_.end());
  orig_of_x_.assign(x_order_.size() + 1, 0);
  std::uint32_t max_y = 0;
  for (VarId y : y_vars_) max_y = std::max(max_y, y.index);
  orig_of_y_.assign(max_y + 1, 0);
}

std::optional<std::size_t> ClauseSet::add_clause(Clause c) {
  c = normalize_clause(std::move(c));
  if (c.empty()) {
    empty_clause_ = true;
    return std::nullopt;
  }
  if (live_set_.count(c)) return std::nullopt;
  live_set_.insert(c);
  clauses_.push_back(std::move(c));
  ++live_count_;
  return clauses_.size() - 1;
}

const Clause& ClauseSet::clause(std::size_t i) const {
  if (i >= clauses_.size() || !clauses_[i]) throw Error("clause index not live");
  return *clauses_[i];
}

std::vector<std::size_t> ClauseSet::live_indices() const {
  std::vector<std::size_t> out;
  out.reserve(live_count_);
  for (std::size_t i = 0; i < clauses_.size(); ++i)
    if (clauses_[i]) out.push_back(i);
  return out;
}

void ClauseSet::reorder_outputs(const std::vector<VarId>& new_order) {
  std::vector<VarId> a = x_order_, b = new_order;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw Error("output order must be a permutation of the X sequence");
  x_order_ = new_order;
}

int ClauseSet::orig_index(VarId v) const {
  if (v.kind == VarKind::Output && v.index < orig_of_x_.size()) {
    int o = orig_of_x_[v.index];
    if (o) return o;
  } else if (v.kind == VarKind::Input && v.index < orig_of_y_.size()) {
    int o = orig_of_y_[v.index];
    if (o) return o;
  }
  return 0;
}

void ClauseSet::set_orig_index(VarId v, int orig) {
  auto& vec = (v.kind == VarKind::Output) ? orig_of_x_ : orig_of_y_;
  if (v.index >= vec.size()) vec.resize(v.index + 1, 0);
  vec[v.index] = orig;
}

ClauseSet ClauseSet::cofactor(VarId v, bool value) const {
  ClauseSet out = *this;
  out.live_set_.clear();
  for (std::size_t i = 0; i < out.clauses_.size(); ++i) {
    if (!out.clauses_[i]) continue;
    Clause& c = *out.clauses_[i];
    bool satisfied = false;
    Clause reduced;
    for (const Lit& l : c) {
      if (l.var == v) {
        if (l.positive == value) satisfied = true;
      } else {
        reduced.push_back(l);
      }
    }
    if (satisfied) {
      out.clauses_[i].reset();
      --out.live_count_;
    } else if (reduced.empty()) {
      out.empty_clause_ = true;
      out.clauses_[i].reset();
      --out.live_count_;
    } else {
      c = std::move(reduced);
    }
  }
  for (const auto& c : out.clauses_)
    if (c) out.live_set_.insert(*c);
  return out;
}

ClauseSet ClauseSet::restricted_to(const std::vector<std::size_t>& indices) const {
  ClauseSet out(x_order_, y_vars_);
  out.orig_of_x_ = orig_of_x_;
  out.orig_of_y_ = orig_of_y_;
  out.clauses_.assign(clauses_.size(), std::nullopt);
  out.live_count_ = 0;
  for (std::size_t i : indices) {
    if (!clauses_[i]) throw Error("restricted_to: dead clause index");
    out.clauses_[i] = clauses_[i];
    out.live_set_.insert(*clauses_[i]);
    ++out.live_count_;
  }
  return out;
}

std::vector<VarId> ClauseSet::output_support() const {
  std::set<VarId> seen;
  for (const auto& c : clauses_) {
    if (!c) continue;
    for (const Lit& l : *c)
      if (l.var.kind == VarKind::Output) seen.insert(l.var);
  }
  std::vector<VarId> out;
  for (VarId x : x_order_)
    if (seen.count(x)) out.push_back(x);
  return out;
}

std::vector<VarId> ClauseSet::input_support() const {
  std::set<VarId> seen;
  for (const auto& c : clauses_) {
    if (!c) continue;
    for (const Lit& l : *c)
      if (l.var.kind == VarKind::Input) seen.insert(l.var);
  }
  return {seen.begin(), seen.end()};
}

NodeId ClauseSet::to_nnf(NnfDag& dag, bool prime_outputs) const {
  if (empty_clause_) return dag.const_false();
  std::vector<NodeId> parts;
  parts.reserve(live_count_);
  for (const auto& c : clauses_) {
    if (!c) continue;
    std::vector<NodeId> lits;
    lits.reserve(c->size());
    for (const Lit& l : *c) {
      VarId v = l.var;
      if (prime_outputs && v.kind == VarKind::Output) v = primed(v);
      lits.push_back(dag.literal(v, l.positive));
    }
    parts.push_back(dag.lor(std::move(lits)));
  }
  return dag.conj(std::move(parts));
}

namespace {

struct Token {
  std::string text;
};

}  // namespace

QdimacsResult parse_qdimacs(std::istream& in, FreeVarPolicy policy) {
  std::string line;
  bool have_header = false;
  long n_vars = 0, n_clauses = 0;
  std::vector<int> a_block, e_block;  // original ids in prefix order
  bool seen_e = false;
  std::vector<std::vector<int>> raw_clauses;
  std::vector<int> current;
  bool in_prefix = true;

  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream is(line);
    std::string tok;
    if (!(is >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "p") {
      std::string fmt;
      if (have_header || !(is >> fmt >> n_vars >> n_clauses) || fmt != "cnf" || n_vars < 0 ||
          n_clauses < 0)
        throw Error("qdimacs: malformed header at line " + std::to_string(lineno));
      have_header = true;
      continue;
    }
    if (!have_header) throw Error("qdimacs: clause before header at line " + std::to_string(lineno));
    if (tok == "a" || tok == "e") {
      if (!in_prefix || !current.empty())
        throw Error("qdimacs: quantifier line inside clause section at line " +
                    std::to_string(lineno));
      if (tok == "a" && seen_e)
        throw Error("qdimacs: more than one quantifier alternation (only forall-exists "
                    "accepted) at line " + std::to_string(lineno));
      if (tok == "e") seen_e = true;
      long v;
      bool terminated = false;
      while (is >> v) {
        if (v == 0) {
          terminated = true;
          break;
        }
        if (v < 0 || v > n_vars)
          throw Error("qdimacs: quantified variable out of range at line " +
                      std::to_string(lineno));
        (tok == "a" ? a_block : e_block).push_back(static_cast<int>(v));
      }
      if (!terminated) throw Error("qdimacs: quantifier line not 0-terminated at line " +
                                   std::to_string(lineno));
      continue;
    }
    in_prefix = false;
    std::istringstream nums(line);
    long v;
    while (nums >> v) {
      if (v == 0) {
        raw_clauses.push_back(current);
        current.clear();
      } else {
        long a = v < 0 ? -v : v;
        if (a > n_vars)
          throw Error("qdimacs: literal out of range at line " + std::to_string(lineno));
        current.push_back(static_cast<int>(v));
      }
    }
  }
  if (!have_header) throw Error("qdimacs: missing header");
  if (!current.empty()) throw Error("qdimacs: last clause not 0-terminated");

  QdimacsResult result;
  std::map<int, VarId> var_of;
  std::vector<VarId> x_order;
  std::vector<VarId> y_vars;
  std::uint32_t nx = 0, ny = 0;
  for (int o : e_block) {
    if (var_of.count(o)) throw Error("qdimacs: variable quantified twice: " + std::to_string(o));
    VarId v = out_var(++nx);
    var_of[o] = v;
    x_order.push_back(v);
  }
  for (int o : a_block) {
    if (var_of.count(o)) throw Error("qdimacs: variable quantified twice: " + std::to_string(o));
    VarId v = in_var(++ny);
    var_of[o] = v;
    y_vars.push_back(v);
  }
  for (const auto& rc : raw_clauses) {
    for (int l : rc) {
      int o = l < 0 ? -l : l;
      if (!var_of.count(o)) {
        if (policy == FreeVarPolicy::Reject)
          throw Error("qdimacs: unquantified variable " + std::to_string(o));
        VarId v = in_var(++ny);
        var_of[o] = v;
        y_vars.push_back(v);
        result.report.warnings.push_back("unquantified variable " + std::to_string(o) +
                                         " treated as input (universal)");
      }
    }
  }

  result.clauses = ClauseSet(x_order, y_vars);
  for (const auto& [orig, v] : var_of) result.clauses.set_orig_index(v, orig);
  for (const auto& rc : raw_clauses) {
    Clause c;
    c.reserve(rc.size());
    for (int l : rc) c.push_back(Lit{var_of.at(l < 0 ? -l : l), l > 0});
    if (clause_tautological(c)) {
      ++result.report.tautologies_dropped;
      continue;
    }
    if (!result.clauses.add_clause(std::move(c))) ++result.report.duplicates_merged;
  }
  return result;
}

QdimacsResult parse_qdimacs(const std::string& text, FreeVarPolicy policy) {
  std::istringstream is(text);
  return parse_qdimacs(is, policy);
}

QdimacsResult parse_qdimacs_file(const std::string& path, FreeVarPolicy policy) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_qdimacs(in, policy);
}

MccPartition clause_graph_mccs(const ClauseSet& s) {
  std::vector<std::size_t> live = s.live_indices();
  // Union-find over live slots, linked through shared output atoms.
  std::map<std::size_t, std::size_t> parent;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t i : live) parent[i] = i;
  std::map<VarId, std::size_t> first_with;
  for (std::size_t i : live) {
    for (const Lit& l : s.clause(i)) {
      if (l.var.kind != VarKind::Output) continue;
      auto [it, fresh] = first_with.emplace(l.var, i);
      if (!fresh) {
        std::size_t a = find(it->second), b = find(i);
        if (a != b) parent[a] = b;
      }
    }
  }
  MccPartition out;
  out.clause_to_part.assign(s.num_slots(), std::nullopt);
  std::map<std::size_t, std::size_t> part_of_root;
  for (std::size_t i : live) {
    std::size_t r = find(i);
    auto [it, fresh] = part_of_root.emplace(r, out.parts.size());
    if (fresh) out.parts.emplace_back();
    out.parts[it->second].push_back(i);
    out.clause_to_part[i] = it->second;
  }
  return out;
}

}  // namespace synkc
