#include "synkc/sat_backend.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace synkc {

CnfEncoding tseitin(const NnfDag& dag, std::span<const RootSpec> roots, bool polarity_aware) {
  CnfEncoding enc;
  std::vector<NodeId> root_ids;
  for (const RootSpec& r : roots) root_ids.push_back(r.root);
  std::vector<NodeId> order = dag.reachable(root_ids);

  // Needed polarities per node, propagated top-down (descending id order is a
  // valid top-down order since children ids are smaller).
  std::unordered_map<NodeId, std::uint8_t> need;  // bit0 = positive, bit1 = negative
  auto mark = [&](NodeId id, std::uint8_t bits) { need[id] |= bits; };
  for (const RootSpec& r : roots) mark(r.root, r.negated ? 2 : 1);
  if (!polarity_aware) {
    for (NodeId id : order) need[id] = 3;
  } else {
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      std::uint8_t bits = need[*it];
      for (NodeId c : dag.node(*it).children) mark(c, bits);
    }
  }

  auto var_of = [&](VarId v) -> sat::Var {
    auto it = enc.input_map.find(v);
    if (it != enc.input_map.end()) return it->second;
    sat::Var sv = enc.num_vars++;
    enc.input_map.emplace(v, sv);
    return sv;
  };

  std::optional<sat::Lit> true_lit;
  auto get_true = [&]() -> sat::Lit {
    if (!true_lit) {
      true_lit = sat::Lit::make(enc.num_vars++, true);
      enc.clauses.push_back({*true_lit});
    }
    return *true_lit;
  };

  for (NodeId id : order) {
    const NnfNode& n = dag.node(id);
    switch (n.kind) {
      case NodeKind::True:
        enc.def_map[id] = get_true();
        break;
      case NodeKind::False:
        enc.def_map[id] = ~get_true();
        break;
      case NodeKind::Literal:
        enc.def_map[id] = sat::Lit::make(var_of(n.var), n.polarity);
        break;
      case NodeKind::And:
      case NodeKind::Or: {
        sat::Lit d = sat::Lit::make(enc.num_vars++, true);
        enc.def_map[id] = d;
        std::uint8_t bits = need[id];
        bool is_and = (n.kind == NodeKind::And);
        // And: d -> c_i each (positive need), (~c_1..~c_k, d) (negative need).
        // Or is dual.
        if ((is_and && (bits & 1)) || (!is_and && (bits & 2))) {
          for (NodeId c : n.children)
            enc.clauses.push_back({is_and ? ~d : d, is_and ? enc.def_map.at(c)
                                                           : ~enc.def_map.at(c)});
        }
        if ((is_and && (bits & 2)) || (!is_and && (bits & 1))) {
          std::vector<sat::Lit> big;
          big.reserve(n.children.size() + 1);
          big.push_back(is_and ? d : ~d);
          for (NodeId c : n.children)
            big.push_back(is_and ? ~enc.def_map.at(c) : enc.def_map.at(c));
          enc.clauses.push_back(std::move(big));
        }
        break;
      }
    }
  }
  return enc;
}

SatService::SatService(SatOptions opts) : opts_(std::move(opts)) { start_clock(); }

void SatService::start_clock() {
  if (opts_.timeout_seconds) {
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(*opts_.timeout_seconds));
  }
}

bool SatService::out_of_time() const {
  return deadline_ && std::chrono::steady_clock::now() >= *deadline_;
}

void SatService::configure(sat::Solver& s) const {
  s.set_conflict_budget(opts_.conflict_budget_per_query);
  if (deadline_) {
    auto dl = *deadline_;
    s.set_interrupt([dl] { return std::chrono::steady_clock::now() >= dl; });
  }
}

void SatService::dump(const sat::Solver& s, const std::vector<sat::Lit>& assumptions,
                      const std::string& what) {
  if (!opts_.dump_dir) return;
  std::filesystem::create_directories(*opts_.dump_dir);
  std::string path =
      *opts_.dump_dir + "/query_" + std::to_string(dump_counter_++) + ".cnf";
  std::ofstream out(path);
  out << "c synkc " << what << "\n";
  s.write_dimacs(out, assumptions);
}

SatResult SatService::is_sat(NnfDag& dag, std::span<const RootSpec> constraint) {
  ++stats_.sat_calls;
  if (out_of_time()) return {SatResult::Kind::Timeout, {}};
  CnfEncoding enc = tseitin(dag, constraint, true);
  sat::Solver solver;
  configure(solver);
  solver.ensure_var(enc.num_vars > 0 ? enc.num_vars - 1 : 0);
  bool ok = true;
  for (auto& c : enc.clauses) ok = solver.add_clause(std::move(c)) && ok;
  for (const RootSpec& r : constraint) {
    sat::Lit d = enc.def_map.at(r.root);
    ok = solver.add_clause({r.negated ? ~d : d}) && ok;
  }
  dump(solver, {}, "is_sat");
  if (!ok) return {SatResult::Kind::Unsat, {}};
  switch (solver.solve()) {
    case sat::Solver::Result::Unsat:
      return {SatResult::Kind::Unsat, {}};
    case sat::Solver::Result::Interrupted:
      return {SatResult::Kind::Timeout, {}};
    case sat::Solver::Result::Sat:
      break;
  }
  Assignment model;
  for (const auto& [v, sv] : enc.input_map) model.set(v, solver.model_bool(sv));
  return {SatResult::Kind::Sat, std::move(model)};
}

Outcome SatService::is_tautology(NnfDag& dag, NodeId root) {
  SatResult r = is_sat(dag, {RootSpec{root, true}});
  switch (r.kind) {
    case SatResult::Kind::Unsat: return Outcome::True;
    case SatResult::Kind::Sat: return Outcome::False;
    default: return Outcome::Timeout;
  }
}

Outcome SatService::semantically_independent(NnfDag& dag, NodeId root,
                                             const std::vector<VarId>& vars) {
  if (vars.empty()) return Outcome::True;
  Binding rename;
  for (VarId v : vars) {
    if (v.primed) throw Error("semantically_independent: vars must be unprimed");
    rename[v] = Bound{dag.literal(primed(v), true), dag.literal(primed(v), false)};
  }
  NodeId copy = dag.substitute(root, rename);
  SatResult r = is_sat(dag, {RootSpec{root, false}, RootSpec{copy, true}});
  switch (r.kind) {
    case SatResult::Kind::Unsat: return Outcome::True;
    case SatResult::Kind::Sat: return Outcome::False;
    default: return Outcome::Timeout;
  }
}

ForallExistsResult SatService::forall_exists_valid(NnfDag& dag,
                                                   const std::vector<VarId>& y_vars,
                                                   NodeId a_root, NodeId b_root) {
  ++stats_.sat_calls;
  RootSpec a_spec{a_root, false};
  CnfEncoding enc_a = tseitin(dag, std::span<const RootSpec>(&a_spec, 1), true);
  sat::Solver abs;
  configure(abs);
  abs.ensure_var(enc_a.num_vars > 0 ? enc_a.num_vars - 1 : 0);
  bool abs_ok = true;
  for (auto& c : enc_a.clauses) abs_ok = abs.add_clause(std::move(c)) && abs_ok;
  abs_ok = abs.add_clause({enc_a.def_map.at(a_root)}) && abs_ok;
  // Every universal variable needs a slot in the abstraction, even when it
  // does not occur in A, so blocking covers full Y assignments.
  std::map<VarId, sat::Var> y_var_of;
  for (VarId y : y_vars) {
    auto it = enc_a.input_map.find(y);
    y_var_of[y] = (it != enc_a.input_map.end()) ? it->second : abs.new_var();
  }

  RootSpec b_spec{b_root, false};
  CnfEncoding enc_b = tseitin(dag, std::span<const RootSpec>(&b_spec, 1), true);
  sat::Solver ver;
  configure(ver);
  ver.ensure_var(enc_b.num_vars > 0 ? enc_b.num_vars - 1 : 0);
  bool ver_ok = true;
  for (auto& c : enc_b.clauses) ver_ok = ver.add_clause(std::move(c)) && ver_ok;
  ver_ok = ver.add_clause({enc_b.def_map.at(b_root)}) && ver_ok;

  dump(abs, {}, "forall_exists_valid abstraction");
  dump(ver, {}, "forall_exists_valid verification");

  ForallExistsResult result{ForallExistsResult::Kind::Valid, {}, 0};
  const std::int64_t cap =
      y_vars.size() < 62 ? (std::int64_t{1} << y_vars.size()) : std::int64_t{1} << 62;
  while (true) {
    if (!abs_ok) return result;  // abstraction exhausted: valid
    if (out_of_time()) {
      result.kind = ForallExistsResult::Kind::Timeout;
      return result;
    }
    ++stats_.sat_calls;
    switch (abs.solve()) {
      case sat::Solver::Result::Unsat:
        return result;
      case sat::Solver::Result::Interrupted:
        result.kind = ForallExistsResult::Kind::Timeout;
        return result;
      case sat::Solver::Result::Sat:
        break;
    }
    ++result.iterations;
    ++stats_.cegar_iterations;
    if (result.iterations > cap)
      throw Error("forall_exists_valid: blocking failed to terminate");
    Assignment y_star;
    for (const auto& [y, sv] : y_var_of) y_star.set(y, abs.model_bool(sv));
    std::vector<sat::Lit> assumptions;
    for (const auto& [y, val] : y_star.values()) {
      auto it = enc_b.input_map.find(y);
      if (it != enc_b.input_map.end()) assumptions.push_back(sat::Lit::make(it->second, val));
    }
    ++stats_.sat_calls;
    if (!ver_ok) {
      result.kind = ForallExistsResult::Kind::Counterexample;
      result.y_witness = std::move(y_star);
      return result;
    }
    switch (ver.solve(assumptions)) {
      case sat::Solver::Result::Interrupted:
        result.kind = ForallExistsResult::Kind::Timeout;
        return result;
      case sat::Solver::Result::Unsat:
        result.kind = ForallExistsResult::Kind::Counterexample;
        result.y_witness = std::move(y_star);
        return result;
      case sat::Solver::Result::Sat: {
        std::vector<sat::Lit> block;
        block.reserve(y_var_of.size());
        for (const auto& [y, sv] : y_var_of)
          block.push_back(sat::Lit::make(sv, !y_star.get(y)));
        abs_ok = abs.add_clause(std::move(block));
        break;
      }
    }
  }
}

}  // namespace synkc
