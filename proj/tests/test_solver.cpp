#include <random>

#include "doctest.h"
#include "support.hpp"
#include "synkc/sat_backend.hpp"

using namespace synkc;
using namespace synkc::test;

namespace {

// reference: brute-force satisfiability of a clause list
bool brute_sat(int nvars, const std::vector<std::vector<int>>& clauses) {
  for (int m = 0; m < (1 << nvars); ++m) {
    bool all = true;
    for (const auto& c : clauses) {
      bool any = false;
      for (int l : c) {
        int v = std::abs(l) - 1;
        bool val = (m >> v) & 1;
        if ((l > 0) == val) any = true;
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("cdcl agrees with brute force on random 3-sat") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 300; ++round) {
    int nvars = 3 + static_cast<int>(rng() % 8);
    int nclauses = 2 + static_cast<int>(rng() % (3 * nvars));
    std::vector<std::vector<int>> clauses;
    for (int c = 0; c < nclauses; ++c) {
      std::vector<int> cl;
      int w = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < w; ++k) {
        int v = 1 + static_cast<int>(rng() % nvars);
        cl.push_back((rng() & 1) ? v : -v);
      }
      clauses.push_back(cl);
    }
    sat::Solver solver;
    bool ok = true;
    for (const auto& c : clauses) {
      std::vector<sat::Lit> lits;
      for (int l : c) lits.push_back(sat::Lit::make(std::abs(l) - 1, l > 0));
      ok = solver.add_clause(lits) && ok;
    }
    bool expected = brute_sat(nvars, clauses);
    if (!ok) {
      CHECK_FALSE(expected);
      continue;
    }
    auto res = solver.solve();
    REQUIRE(res != sat::Solver::Result::Interrupted);
    CHECK((res == sat::Solver::Result::Sat) == expected);
    if (res == sat::Solver::Result::Sat) {
      for (const auto& c : clauses) {
        bool any = false;
        for (int l : c)
          if (solver.model_value(sat::Lit::make(std::abs(l) - 1, l > 0)) == sat::LBool::True)
            any = true;
        CHECK(any);
      }
    }
  }
}

TEST_CASE("cdcl: pigeonhole 4 into 3 is unsat") {
  sat::Solver s;
  auto var = [](int p, int h) { return sat::Var(p * 3 + h); };
  for (int p = 0; p < 4; ++p) {
    std::vector<sat::Lit> at_least;
    for (int h = 0; h < 3; ++h) at_least.push_back(sat::Lit::make(var(p, h), true));
    s.add_clause(at_least);
  }
  for (int h = 0; h < 3; ++h)
    for (int p1 = 0; p1 < 4; ++p1)
      for (int p2 = p1 + 1; p2 < 4; ++p2)
        s.add_clause({sat::Lit::make(var(p1, h), false), sat::Lit::make(var(p2, h), false)});
  CHECK(s.solve() == sat::Solver::Result::Unsat);
}

TEST_CASE("cdcl: incremental assumptions") {
  sat::Solver s;
  sat::Var a = s.new_var(), b = s.new_var();
  s.add_clause({sat::Lit::make(a, true), sat::Lit::make(b, true)});
  CHECK(s.solve({sat::Lit::make(a, false)}) == sat::Solver::Result::Sat);
  CHECK(s.model_value(sat::Lit::make(b, true)) == sat::LBool::True);
  CHECK(s.solve({sat::Lit::make(a, false), sat::Lit::make(b, false)}) ==
        sat::Solver::Result::Unsat);
  // still satisfiable without assumptions afterwards
  CHECK(s.solve() == sat::Solver::Result::Sat);
}

TEST_CASE("cdcl: conflict budget interrupts") {
  // hard random instance with a tiny budget
  std::mt19937_64 rng(31);
  sat::Solver s;
  int nvars = 30;
  for (int c = 0; c < 130; ++c) {
    std::vector<sat::Lit> cl;
    for (int k = 0; k < 3; ++k)
      cl.push_back(sat::Lit::make(static_cast<sat::Var>(rng() % nvars), rng() & 1));
    s.add_clause(cl);
  }
  s.set_conflict_budget(1);
  auto r = s.solve();
  CHECK((r == sat::Solver::Result::Interrupted || r == sat::Solver::Result::Sat ||
         r == sat::Solver::Result::Unsat));
}

TEST_CASE("tseitin: literal leaf gets the variable itself") {
  NnfDag dag(VarDecl{1, 1});
  NodeId leaf = dag.literal(out_var(1));
  RootSpec spec{leaf, false};
  CnfEncoding enc = tseitin(dag, std::span<const RootSpec>(&spec, 1), false);
  CHECK(enc.clauses.empty());
  CHECK(enc.def_map.at(leaf) == sat::Lit::make(enc.input_map.at(out_var(1)), true));
}

TEST_CASE("tseitin: textbook AND with full polarity") {
  NnfDag dag(VarDecl{1, 1});
  NodeId a = dag.land(dag.literal(out_var(1)), dag.literal(in_var(1)));
  RootSpec spec{a, false};
  CnfEncoding enc = tseitin(dag, std::span<const RootSpec>(&spec, 1), false);
  CHECK(enc.clauses.size() == 3);
}

TEST_CASE("is_sat: models re-evaluate to true; equisatisfiability") {
  std::mt19937_64 rng(37);
  SatService sat;
  for (int round = 0; round < 100; ++round) {
    NnfDag dag(VarDecl{3, 3});
    RandomNnfParams params{3, 3, 10, 3};
    NodeId f = gen_random_nnf(dag, params, rng);
    SatResult r = sat.is_sat(dag, {RootSpec{f, false}});
    TruthTable tt = TruthTable::of(dag, f);
    bool expected = !tt.is_constant(false);
    CHECK((r.kind == SatResult::Kind::Sat) == expected);
    if (r.kind == SatResult::Kind::Sat) CHECK(dag.evaluate(f, r.model.project(dag.support(f))));
    // negated root
    SatResult rn = sat.is_sat(dag, {RootSpec{f, true}});
    CHECK((rn.kind == SatResult::Kind::Sat) == !tt.is_constant(true));
    if (rn.kind == SatResult::Kind::Sat)
      CHECK_FALSE(dag.evaluate(f, rn.model.project(dag.support(f))));
  }
}

TEST_CASE("is_sat and is_tautology basics") {
  NnfDag dag(VarDecl{1, 1});
  SatService sat;
  CHECK(sat.is_sat(dag, {RootSpec{dag.const_false(), false}}).kind == SatResult::Kind::Unsat);
  CHECK(sat.is_tautology(dag, dag.const_true()) == Outcome::True);
  NodeId f = dag.lor(dag.literal(out_var(1)), dag.literal(in_var(1)));
  CHECK(sat.is_tautology(dag, f) == Outcome::False);
}

TEST_CASE("semantic independence") {
  NnfDag dag(VarDecl{1, 2});
  SatService sat;
  NodeId taut_part = dag.lor(dag.literal(in_var(1)), dag.literal(in_var(1), false));
  NodeId f = dag.land(taut_part, dag.literal(out_var(1)));
  CHECK(sat.semantically_independent(dag, f, {in_var(1)}) == Outcome::True);
  CHECK(sat.semantically_independent(dag, dag.const_true(), {in_var(1), in_var(2)}) ==
        Outcome::True);

  NnfDag dagk;
  NodeId k = build_k(dagk);
  SatService sat2;
  CHECK(sat2.semantically_independent(dagk, k, {in_var(2)}) == Outcome::False);
}

TEST_CASE("forall-exists agrees with truth-table expansion") {
  std::mt19937_64 rng(41);
  SatService sat;
  int valid_count = 0;
  for (int round = 0; round < 200; ++round) {
    NnfDag dag(VarDecl{3, 3});
    RandomNnfParams params{3, 3, 9, 3};
    NodeId a = gen_random_nnf(dag, params, rng);
    NodeId b = gen_random_nnf(dag, params, rng);
    std::vector<VarId> ys{in_var(1), in_var(2), in_var(3)};
    std::vector<VarId> xs{out_var(1), out_var(2), out_var(3)};
    std::vector<VarId> sup = xs;
    sup.insert(sup.end(), ys.begin(), ys.end());
    TruthTable ta = TruthTable::of(dag, a, sup).exists(xs);
    TruthTable tb = TruthTable::of(dag, b, sup).exists(xs);
    bool expected_valid = true;
    for (std::uint64_t i = 0; i < ta.num_rows(); ++i)
      if (ta.value(i) && !tb.value(i)) expected_valid = false;

    ForallExistsResult r = sat.forall_exists_valid(dag, ys, a, b);
    REQUIRE(r.kind != ForallExistsResult::Kind::Timeout);
    CHECK((r.kind == ForallExistsResult::Kind::Valid) == expected_valid);
    CHECK(r.iterations <= 8);  // 2^|Y|
    if (r.kind == ForallExistsResult::Kind::Valid) ++valid_count;
    if (r.kind == ForallExistsResult::Kind::Counterexample) {
      // the witness Y indeed separates: exists X a, no X' b
      TruthTable taf = TruthTable::of(dag, a, sup).exists(xs);
      TruthTable tbf = TruthTable::of(dag, b, sup).exists(xs);
      Assignment full = r.y_witness;
      for (VarId x : xs) full.set(x, false);
      CHECK(taf.value(taf.row_of(full)));
      CHECK_FALSE(tbf.value(tbf.row_of(full)));
    }
  }
  CHECK(valid_count > 0);
  CHECK(valid_count < 200);
}

TEST_CASE("forall-exists reflexive case and empty Y") {
  NnfDag dag;
  NodeId k = build_k(dag);
  SatService sat;
  std::vector<VarId> ys{in_var(1), in_var(2)};
  CHECK(sat.forall_exists_valid(dag, ys, k, k).kind == ForallExistsResult::Kind::Valid);
  // B constantly false: counterexample on any Y with A satisfiable
  auto r = sat.forall_exists_valid(dag, ys, k, dag.const_false());
  CHECK(r.kind == ForallExistsResult::Kind::Counterexample);
  // no Y variables at all
  NnfDag d2(VarDecl{1, 0});
  NodeId x1 = d2.literal(out_var(1));
  CHECK(sat.forall_exists_valid(d2, {}, x1, x1).kind == ForallExistsResult::Kind::Valid);
  CHECK(sat.forall_exists_valid(d2, {}, x1, d2.const_false()).kind ==
        ForallExistsResult::Kind::Counterexample);
}
