// synkc: compile CNF relational specifications into SynNNF, extract Skolem
// function vectors, run ordered quantifier elimination, and independently
// verify membership, Skolem correctness and refinement.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "synkc/c2syn.hpp"
#include "synkc/nnf_io.hpp"
#include "synkc/oracle.hpp"

using json = nlohmann::ordered_json;
using namespace synkc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unreadable";
  std::ostringstream ss;
  ss << in.rdbuf();
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(ss.str())));
  return buf;
}

class Phases {
 public:
  void start(const std::string& name) {
    flush();
    current_ = name;
    t0_ = std::chrono::steady_clock::now();
  }
  json to_json() {
    flush();
    json j = json::object();
    for (auto& [k, v] : ms_) j[k] = v;
    return j;
  }

 private:
  void flush() {
    if (!current_.empty()) {
      auto dt = std::chrono::steady_clock::now() - t0_;
      ms_[current_] +=
          std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(dt).count();
      current_.clear();
    }
  }
  std::map<std::string, double> ms_;
  std::string current_;
  std::chrono::steady_clock::time_point t0_;
};

// Report emitted on every exit path, including errors and timeouts.
struct RunReport {
  json doc = json::object();
  Phases phases;

  explicit RunReport(const std::string& command) {
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["inputs"] = json::object();
    doc["verdicts"] = json::object();
    doc["outputs"] = json::object();
  }
  void add_input(const std::string& path) { doc["inputs"][path] = file_digest(path); }
  void add_output(const std::string& path) { doc["outputs"][path] = file_digest(path); }
  int finish(int code, const SatStats* stats = nullptr) {
    doc["phases_ms"] = phases.to_json();
    if (stats) {
      doc["sat_calls"] = stats->sat_calls;
      doc["cegar_iterations"] = stats->cegar_iterations;
    }
    doc["exit_code"] = code;
    std::cout << doc.dump(2) << std::endl;
    return code;
  }
};

// A specification with its original external variable numbering.
struct LoadedSpec {
  NnfDag dag;
  NodeId root = 0;
  std::optional<ClauseSet> clauses;  // when loaded from QDIMACS
  std::vector<NnfFileVar> vars;      // outputs in X order first
  std::vector<VarId> x_order;
  std::vector<VarId> y_vars;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<NnfFileVar> vars_of_clauses(const ClauseSet& cs) {
  std::vector<NnfFileVar> vars;
  for (VarId x : cs.x_order()) {
    int orig = cs.orig_index(x);
    int fid = orig ? orig : static_cast<int>(x.index);
    vars.push_back({x, fid, fid});
  }
  for (VarId y : cs.y_vars()) {
    int orig = cs.orig_index(y);
    int fid = orig ? orig : static_cast<int>(cs.x_order().size() + y.index);
    vars.push_back({y, fid, fid});
  }
  return vars;
}

LoadedSpec load_spec(const std::string& path, FreeVarPolicy policy,
                     std::vector<std::string>* warnings) {
  LoadedSpec spec;
  if (ends_with(path, ".qdimacs") || ends_with(path, ".cnf") || ends_with(path, ".dimacs")) {
    QdimacsResult r = parse_qdimacs_file(path, policy);
    if (warnings)
      warnings->insert(warnings->end(), r.report.warnings.begin(), r.report.warnings.end());
    spec.clauses = std::move(r.clauses);
    spec.dag.var_decl() = VarDecl{static_cast<std::uint32_t>(spec.clauses->x_order().size()),
                                  static_cast<std::uint32_t>(spec.clauses->y_vars().size())};
    spec.root = spec.clauses->to_nnf(spec.dag);
    spec.vars = vars_of_clauses(*spec.clauses);
    spec.x_order = spec.clauses->x_order();
    spec.y_vars = spec.clauses->y_vars();
  } else {
    NnfFile file = read_nnf_file(path, spec.dag);
    spec.root = file.roots.at(0).second;
    spec.vars = file.vars;
    for (const auto& v : file.vars) {
      if (v.var.kind == VarKind::Output)
        spec.x_order.push_back(v.var);
      else
        spec.y_vars.push_back(v.var);
    }
  }
  return spec;
}

// Reads a second .nnf against an already-loaded spec, matching variables by
// original index.
NodeId load_companion_nnf(const std::string& path, LoadedSpec& spec) {
  NnfDag other;
  NnfFile file = read_nnf_file(path, other);
  std::map<std::pair<VarKind, int>, VarId> by_orig;
  for (const auto& v : spec.vars) by_orig[{v.var.kind, v.orig_index}] = v.var;
  std::map<VarId, VarId> remap;
  for (const auto& v : file.vars) {
    auto it = by_orig.find({v.var.kind, v.orig_index});
    if (it == by_orig.end())
      throw Error(path + ": variable with original index " + std::to_string(v.orig_index) +
                  " is not part of the specification");
    remap[v.var] = it->second;
  }
  return import_dag(spec.dag, other, file.roots.at(0).second, remap);
}

json assignment_json(const Assignment& pi, const LoadedSpec& spec) {
  std::map<VarId, int> orig;
  for (const auto& v : spec.vars) orig[v.var] = v.orig_index;
  json x = json::object(), y = json::object(), xp = json::object();
  for (const auto& [v, val] : pi.values()) {
    VarId base = v;
    base.primed = false;
    auto it = orig.find(base);
    std::string key = it != orig.end() ? std::to_string(it->second) : to_string(v);
    if (v.kind == VarKind::Input)
      y[key] = val ? 1 : 0;
    else if (v.primed)
      xp[key] = val ? 1 : 0;
    else
      x[key] = val ? 1 : 0;
  }
  json out = json::object();
  if (!y.empty()) out["y"] = y;
  if (!x.empty()) out["x"] = x;
  if (!xp.empty()) out["x_prime"] = xp;
  return out;
}

void write_spec_nnf(const std::string& path, const NnfDag& dag, NodeId root,
                    const std::vector<NnfFileVar>& vars) {
  write_nnf_file(path, dag, {{"F", root}}, vars);
}

SatOptions make_sat_options(double timeout_s, const std::string& dump_dir) {
  SatOptions o;
  if (timeout_s > 0) o.timeout_seconds = timeout_s;
  if (!dump_dir.empty())
    o.dump_dir = dump_dir;
  else if (const char* env = std::getenv("SYNKC_SOLVER_DUMP"); env && *env)
    o.dump_dir = env;
  return o;
}

struct VerifyOutcome {
  bool syntactic_ok = false;
  RefinementReport refinement;

  json to_json(const LoadedSpec& spec) const {
    auto name = [](CondStatus s) {
      return s == CondStatus::Holds ? "holds" : s == CondStatus::Fails ? "fails" : "timeout";
    };
    json j;
    j["syntactic_synnnf"] = syntactic_ok;
    j["condition_a"] = name(refinement.cond_a);
    j["condition_b"] = name(refinement.cond_b);
    if (refinement.cond_a == CondStatus::Fails)
      j["condition_a_witness"] = assignment_json(refinement.cond_a_witness, spec);
    if (refinement.cond_b == CondStatus::Fails)
      j["condition_b_witness"] = assignment_json(refinement.cond_b_witness, spec);
    return j;
  }
};

// The post-hoc verification pipeline: syntactic path check per output, then
// refinement condition (a) by 2QBF and (b) by one SAT call.
VerifyOutcome run_verify(LoadedSpec& spec, NodeId compiled, SatService& sat,
                         RunReport& report) {
  VerifyOutcome out;
  report.phases.start("verify_syntactic");
  SynAnalysis an(spec.dag, compiled, spec.x_order);
  out.syntactic_ok = true;
  for (int i = 1; i <= an.n(); ++i)
    if (an.syntactic_fail_node(i)) out.syntactic_ok = false;
  report.phases.start("verify_refinement");
  out.refinement = check_refines(spec.dag, compiled, spec.root, spec.y_vars, sat);
  return out;
}

void write_skolem_text(const std::string& path, const LoadedSpec& spec,
                       const SkolemVector& psi) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  for (std::size_t j = 0; j < psi.order.size(); ++j) {
    int orig = 0;
    for (const auto& v : spec.vars)
      if (v.var == psi.order[j]) orig = v.orig_index;
    out << "psi_" << (j + 1) << " (output " << orig
        << ") = " << spec.dag.to_text(psi.pos_roots[j]) << "\n";
  }
}

void write_skolem_nnf(const std::string& path, const LoadedSpec& spec,
                      const SkolemVector& psi) {
  std::vector<std::pair<std::string, NodeId>> roots;
  for (std::size_t j = 0; j < psi.order.size(); ++j) {
    roots.emplace_back("psi_" + std::to_string(j + 1), psi.pos_roots[j]);
    roots.emplace_back("npsi_" + std::to_string(j + 1), psi.neg_roots[j]);
  }
  write_nnf_file(path, spec.dag, roots, spec.vars);
}

int cmd_compile(const std::string& in_path, const std::string& out_path, bool verify,
                const std::string& skolem_path, const std::string& skolem_text_path,
                bool stats_json, const std::string& order_spec,
                int gacks_cap, bool always_try_gacks, std::uint64_t seed,
                FreeVarPolicy policy, double timeout_s, const std::string& dump_dir,
                bool synthesize_mode) {
  RunReport report(synthesize_mode ? "synthesize" : "compile");
  report.doc["seed"] = seed;
  report.add_input(in_path);
  SatService sat(make_sat_options(timeout_s, dump_dir));
  try {
    report.phases.start("parse");
    std::vector<std::string> warnings;
    LoadedSpec spec = load_spec(in_path, policy, &warnings);
    if (!warnings.empty()) report.doc["warnings"] = warnings;

    NodeId compiled = spec.root;
    if (spec.clauses) {
      if (!order_spec.empty() && order_spec != "prefix") {
        if (order_spec.rfind("file:", 0) != 0)
          throw Error("--order expects 'prefix' or 'file:<path>'");
        std::ifstream of(order_spec.substr(5));
        if (!of) throw Error("cannot open order file");
        std::map<int, VarId> by_orig;
        for (const auto& v : spec.vars)
          if (v.var.kind == VarKind::Output) by_orig[v.orig_index] = v.var;
        std::vector<VarId> order;
        int o;
        while (of >> o) {
          auto it = by_orig.find(o);
          if (it == by_orig.end())
            throw Error("order file lists unknown output " + std::to_string(o));
          order.push_back(it->second);
        }
        spec.clauses->reorder_outputs(order);
        spec.x_order = order;
        spec.vars = vars_of_clauses(*spec.clauses);
      }
      report.phases.start("compile");
      CompileOptions opts;
      opts.gacks_cap = gacks_cap;
      opts.always_try_gacks = always_try_gacks;
      CompileResult r = compile(spec.dag, *spec.clauses, sat, opts);
      if (r.status == CompileResult::Status::Timeout) {
        report.doc["verdicts"]["compile"] = "timeout";
        return report.finish(kExitResource, &sat.stats());
      }
      compiled = r.root;
      report.doc["stats"] = {{"branches", r.stats.branches},
                             {"max_level", r.stats.max_level},
                             {"stage", r.stats.stage2 ? 2 : 1},
                             {"gacks_attempts", r.stats.gacks_attempts},
                             {"gacks_exits", r.stats.gacks_exits},
                             {"defckt_exits", r.stats.defckt_exits},
                             {"degenerate_exits", r.stats.degenerate_exits},
                             {"dag_size", spec.dag.size(compiled)}};
    }

    if (!out_path.empty()) {
      report.phases.start("write");
      write_spec_nnf(out_path, spec.dag, compiled, spec.vars);
      report.add_output(out_path);
    }

    int exit_code = kExitOk;
    if (synthesize_mode || !skolem_path.empty() || !skolem_text_path.empty()) {
      report.phases.start("skolem");
      SynAnalysis an(spec.dag, compiled, spec.x_order);
      SkolemVector psi = gacks_skolem(an);
      if (!skolem_path.empty()) {
        write_skolem_nnf(skolem_path, spec, psi);
        report.add_output(skolem_path);
      }
      if (!skolem_text_path.empty()) {
        write_skolem_text(skolem_text_path, spec, psi);
        report.add_output(skolem_text_path);
      }
      if (synthesize_mode) {
        report.phases.start("error_formula");
        ErrorFormulaResult err = error_formula_check(spec.dag, spec.root, psi, sat);
        switch (err.verdict) {
          case ErrorFormulaResult::Verdict::Correct:
            report.doc["verdicts"]["skolem"] = "correct";
            break;
          case ErrorFormulaResult::Verdict::Incorrect: {
            report.doc["verdicts"]["skolem"] = "incorrect";
            json w = assignment_json(err.y_witness, spec);
            json xm = assignment_json(err.x_model, spec);
            json pv = assignment_json(err.psi_values, spec);
            report.doc["verdicts"]["skolem_witness"] = {
                {"y", w.contains("y") ? w["y"] : json::object()},
                {"x_model", xm.contains("x") ? xm["x"] : json::object()},
                {"psi_values", pv.contains("x") ? pv["x"] : json::object()}};
            exit_code = kExitViolated;
            break;
          }
          case ErrorFormulaResult::Verdict::Timeout:
            report.doc["verdicts"]["skolem"] = "timeout";
            return report.finish(kExitResource, &sat.stats());
        }
      }
    }

    if (verify) {
      VerifyOutcome v = run_verify(spec, compiled, sat, report);
      report.doc["verdicts"]["verify"] = v.to_json(spec);
      if (v.refinement.timed_out()) return report.finish(kExitResource, &sat.stats());
      if (!v.syntactic_ok || !v.refinement.holds()) exit_code = kExitViolated;
    }
    if (stats_json) report.doc["emit_stats"] = true;
    return report.finish(exit_code, &sat.stats());
  } catch (const Error& e) {
    report.doc["error"] = e.what();
    return report.finish(kExitUsage, &sat.stats());
  }
}

int cmd_check(const std::string& path, const std::string& form, const std::string& method,
              double timeout_s, const std::string& dump_dir) {
  RunReport report("check");
  report.add_input(path);
  report.doc["form"] = form;
  report.doc["method"] = method;
  SatService sat(make_sat_options(timeout_s, dump_dir));
  try {
    report.phases.start("parse");
    LoadedSpec spec = load_spec(path, FreeVarPolicy::Universal, nullptr);
    report.phases.start("check");
    if (form == "synnnf") {
      CheckMethod m = method == "semantic"    ? CheckMethod::Semantic
                      : method == "syntactic" ? CheckMethod::Syntactic
                                              : CheckMethod::Auto;
      SynAnalysis an(spec.dag, spec.root, spec.x_order);
      MembershipReport r = an.check_membership(m, sat);
      json per_i = json::array();
      for (const PerIVerdict& p : r.per_i) {
        per_i.push_back(
            {{"i", p.i},
             {"unrealizable", p.unrealizable == Outcome::True    ? "yes"
                              : p.unrealizable == Outcome::False ? "no"
                                                                 : "timeout"},
             {"method", p.method == PerIMethod::SyntacticPathCheck ? "syntactic_path_check"
                                                                   : "semantic_zeta"}});
      }
      report.doc["verdicts"]["per_i"] = per_i;
      switch (r.verdict) {
        case MembershipReport::Verdict::In:
          report.doc["verdicts"]["membership"] = "in";
          return report.finish(kExitOk, &sat.stats());
        case MembershipReport::Verdict::NotIn:
          report.doc["verdicts"]["membership"] = "not_in";
          report.doc["verdicts"]["failing_index"] = r.failing_index;
          report.doc["verdicts"]["witness"] = assignment_json(r.witness, spec);
          return report.finish(kExitViolated, &sat.stats());
        case MembershipReport::Verdict::Timeout:
          report.doc["verdicts"]["membership"] = "timeout";
          return report.finish(kExitUsage, &sat.stats());
      }
    } else if (form == "dnnf" || form == "wdnnf") {
      bool ok = form == "dnnf" ? check_dnnf(spec.dag, spec.root)
                               : check_wdnnf(spec.dag, spec.root);
      report.doc["verdicts"]["membership"] = ok ? "in" : "not_in";
      return report.finish(ok ? kExitOk : kExitViolated, &sat.stats());
    } else if (form == "ddnnf") {
      Outcome ok = check_ddnnf(spec.dag, spec.root, sat);
      report.doc["verdicts"]["membership"] =
          ok == Outcome::True ? "in" : (ok == Outcome::False ? "not_in" : "timeout");
      if (ok == Outcome::Timeout) return report.finish(kExitUsage, &sat.stats());
      return report.finish(ok == Outcome::True ? kExitOk : kExitViolated, &sat.stats());
    }
    throw Error("unknown form " + form);
  } catch (const Error& e) {
    report.doc["error"] = e.what();
    return report.finish(kExitUsage, &sat.stats());
  }
}

int cmd_verify(const std::string& orig_path, const std::string& compiled_path,
               FreeVarPolicy policy, double timeout_s, const std::string& dump_dir) {
  RunReport report("verify");
  report.add_input(orig_path);
  report.add_input(compiled_path);
  SatService sat(make_sat_options(timeout_s, dump_dir));
  try {
    report.phases.start("parse");
    LoadedSpec spec = load_spec(orig_path, policy, nullptr);
    NodeId compiled =
        compiled_path == orig_path ? spec.root : load_companion_nnf(compiled_path, spec);
    VerifyOutcome v = run_verify(spec, compiled, sat, report);
    report.doc["verdicts"]["verify"] = v.to_json(spec);
    if (v.refinement.timed_out()) return report.finish(kExitResource, &sat.stats());
    bool ok = v.syntactic_ok && v.refinement.holds();
    return report.finish(ok ? kExitOk : kExitViolated, &sat.stats());
  } catch (const Error& e) {
    report.doc["error"] = e.what();
    return report.finish(kExitUsage, &sat.stats());
  }
}

int cmd_refine_check(const std::string& f_path, const std::string& ftilde_path,
                     FreeVarPolicy policy, double timeout_s, const std::string& dump_dir) {
  RunReport report("refine-check");
  report.add_input(f_path);
  report.add_input(ftilde_path);
  SatService sat(make_sat_options(timeout_s, dump_dir));
  try {
    report.phases.start("parse");
    LoadedSpec spec = load_spec(f_path, policy, nullptr);
    NodeId ftilde = load_companion_nnf(ftilde_path, spec);
    report.phases.start("refinement");
    RefinementReport r = check_refines(spec.dag, ftilde, spec.root, spec.y_vars, sat);
    VerifyOutcome v;
    v.syntactic_ok = true;
    v.refinement = r;
    json j = v.to_json(spec);
    j.erase("syntactic_synnnf");
    report.doc["verdicts"]["refinement"] = j;
    if (r.timed_out()) return report.finish(kExitResource, &sat.stats());
    return report.finish(r.holds() ? kExitOk : kExitViolated, &sat.stats());
  } catch (const Error& e) {
    report.doc["error"] = e.what();
    return report.finish(kExitUsage, &sat.stats());
  }
}

int cmd_gen(const std::string& family, int n, int m, const std::string& opprime,
            std::uint64_t seed, const std::string& out_path) {
  RunReport report("gen");
  report.doc["seed"] = seed;
  try {
    if (family != "appendix") throw Error("unknown family " + family);
    if (n < 1 || m < 0) throw Error("need --n >= 1 and --m >= 0");
    if (opprime != "or" && opprime != "xor") throw Error("--opprime expects or|xor");
    std::mt19937_64 rng(seed);
    NnfDag dag(VarDecl{static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m)});
    std::vector<NodeId> subfns;
    for (int i = 1; i <= n + 1; ++i) {
      std::vector<VarId> allowed;
      if (i <= n)
        for (int j = i + 1; j <= n; ++j) allowed.push_back(out_var(j));
      for (int j = 1; j <= m; ++j) allowed.push_back(in_var(j));
      subfns.push_back(gen_random_nnf_over(dag, allowed, 4, rng));
    }
    std::vector<FamilyOpPrime> opps(
        n, opprime == "xor" ? FamilyOpPrime::Xor : FamilyOpPrime::Or);
    std::vector<FamilyOp> ops;
    for (int i = 0; i < n; ++i) ops.push_back((rng() & 1) ? FamilyOp::And : FamilyOp::Or);
    NodeId g = gen_family(dag, subfns, opps, ops);
    write_spec_nnf(out_path, dag, g, default_file_vars(dag.var_decl()));
    report.add_output(out_path);
    report.doc["verdicts"]["generated"] = true;
    return report.finish(kExitOk);
  } catch (const Error& e) {
    report.doc["error"] = e.what();
    return report.finish(kExitUsage);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synkc: knowledge compilation for Boolean functional synthesis"};
  app.require_subcommand(1);

  std::string in_path, out_path, skolem_path, skolem_text_path, order_spec = "prefix", dump_dir;
  std::string form = "synnnf", method = "auto", free_vars = "universal";
  std::string family = "appendix", opprime = "or";
  std::string orig_path, compiled_path, ftilde_path;
  bool verify_flag = false, stats_json = false, always_try_gacks = false;
  int gacks_cap = 64, gen_n = 2, gen_m = 2;
  std::uint64_t seed = 0;
  double timeout_s = 3600;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--timeout", timeout_s, "wall budget in seconds (default 3600)");
    cmd->add_option("--dump-cnf", dump_dir,
                    "dump every solver query as DIMACS into a directory");
    cmd->add_option("--free-vars", free_vars,
                    "unquantified DIMACS variables: universal|reject")
        ->check(CLI::IsMember({"universal", "reject"}));
  };

  CLI::App* c = app.add_subcommand("compile", "compile a QDIMACS specification to SynNNF");
  c->add_option("input", in_path, "input .qdimacs")->required();
  c->add_option("-o,--output", out_path, "output .nnf")->required();
  c->add_flag("--verify", verify_flag, "run the post-hoc verification pipeline");
  c->add_option("--skolem", skolem_path, "also emit the Skolem vector of the result");
  c->add_option("--skolem-text", skolem_text_path,
                "flat Boolean-expression dump of the Skolem functions");
  c->add_flag("--stats", stats_json, "emit stats in the JSON report");
  c->add_option("--order", order_spec, "output order: prefix|file:<path>");
  c->add_option("--gacks-cap", gacks_cap,
                "skip the GACKS attempt above this |Out| at depth > 0");
  c->add_flag("--always-try-gacks", always_try_gacks, "disable the GACKS cap");
  c->add_option("--seed", seed, "recorded in the report; runs are deterministic");
  add_common(c);

  CLI::App* k = app.add_subcommand("check", "check membership in a normal form");
  k->add_option("input", in_path, "input .nnf")->required();
  k->add_option("--form", form, "synnnf|wdnnf|dnnf|ddnnf")
      ->check(CLI::IsMember({"synnnf", "wdnnf", "dnnf", "ddnnf"}));
  k->add_option("--method", method, "auto|semantic|syntactic")
      ->check(CLI::IsMember({"auto", "semantic", "syntactic"}));
  add_common(k);

  CLI::App* s =
      app.add_subcommand("synthesize", "compile and extract a verified Skolem vector");
  s->add_option("input", in_path, "input .qdimacs or .nnf")->required();
  s->add_option("-o,--output", skolem_path, "output Skolem .nnf")->required();
  s->add_option("--skolem-text", skolem_text_path,
                "flat Boolean-expression dump of the Skolem functions");
  s->add_option("--compiled", out_path, "also keep the compiled .nnf");
  s->add_option("--gacks-cap", gacks_cap,
                "skip the GACKS attempt above this |Out| at depth > 0");
  s->add_flag("--always-try-gacks", always_try_gacks, "disable the GACKS cap");
  s->add_option("--seed", seed, "recorded in the report; runs are deterministic");
  add_common(s);

  CLI::App* v = app.add_subcommand("verify", "verify a compilation against its specification");
  v->add_option("original", orig_path, "original .qdimacs or .nnf")->required();
  v->add_option("compiled", compiled_path, "compiled .nnf")->required();
  add_common(v);

  CLI::App* r = app.add_subcommand("refine-check", "check F~ <=syn F");
  r->add_option("F", orig_path, "original .qdimacs or .nnf")->required();
  r->add_option("Ftilde", ftilde_path, "candidate refinement .nnf")->required();
  add_common(r);

  CLI::App* g = app.add_subcommand("gen", "generate fixture instances");
  g->add_option("--family", family, "appendix");
  g->add_option("--n", gen_n, "number of outputs");
  g->add_option("--m", gen_m, "number of inputs");
  g->add_option("--opprime", opprime, "or|xor");
  g->add_option("--seed", seed, "generator seed");
  g->add_option("-o,--output", out_path, "output .nnf")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  FreeVarPolicy policy =
      free_vars == "reject" ? FreeVarPolicy::Reject : FreeVarPolicy::Universal;
  if (c->parsed())
    return cmd_compile(in_path, out_path, verify_flag, skolem_path, skolem_text_path,
                       stats_json, order_spec, gacks_cap, always_try_gacks, seed, policy,
                       timeout_s, dump_dir, false);
  if (k->parsed()) return cmd_check(in_path, form, method, timeout_s, dump_dir);
  if (s->parsed())
    return cmd_compile(in_path, out_path, false, skolem_path, skolem_text_path, false,
                       "prefix", gacks_cap, always_try_gacks, seed, policy, timeout_s,
                       dump_dir, true);
  if (v->parsed()) return cmd_verify(orig_path, compiled_path, policy, timeout_s, dump_dir);
  if (r->parsed()) return cmd_refine_check(orig_path, ftilde_path, policy, timeout_s, dump_dir);
  if (g->parsed()) return cmd_gen(family, gen_n, gen_m, opprime, seed, out_path);
  return kExitUsage;
}
