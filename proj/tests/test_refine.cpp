#include <random>

#include "doctest.h"
#include "support.hpp"
#include "synkc/refine.hpp"
#include "synkc/synnnf.hpp"

using namespace synkc;
using namespace synkc::test;

namespace {

// Oracle for Definition 5 over full truth tables.
bool oracle_refines(const NnfDag& dag, NodeId f_tilde, NodeId f, std::uint32_t n,
                    std::uint32_t m) {
  std::vector<VarId> xs, sup;
  for (std::uint32_t i = 1; i <= n; ++i) xs.push_back(out_var(i));
  sup = xs;
  for (std::uint32_t j = 1; j <= m; ++j) sup.push_back(in_var(j));
  return tt_refines(TruthTable::of(dag, f_tilde, sup), TruthTable::of(dag, f, sup), xs);
}

std::vector<VarId> all_inputs(std::uint32_t m) {
  std::vector<VarId> ys;
  for (std::uint32_t j = 1; j <= m; ++j) ys.push_back(in_var(j));
  return ys;
}

}  // namespace

TEST_CASE("check_refines on Example 3 and degenerate cases") {
  SatService sat;
  auto g = parse_qdimacs(g_qdimacs());
  NnfDag dag(VarDecl{2, 2});
  NodeId gf = g.clauses.to_nnf(dag);
  NodeId gt = dag.land(dag.literal(out_var(2)), dag.literal(out_var(1)));
  RefinementReport r = check_refines(dag, gt, gf, all_inputs(2), sat);
  CHECK(r.holds());
  CHECK(oracle_refines(dag, gt, gf, 2, 2));

  // reflexivity
  RefinementReport refl = check_refines(dag, gf, gf, all_inputs(2), sat);
  CHECK(refl.holds());

  // F~ = 0 against a satisfiable F: condition (a) fails
  RefinementReport zero = check_refines(dag, dag.const_false(), gf, all_inputs(2), sat);
  CHECK(zero.cond_a == CondStatus::Fails);
  CHECK_FALSE(zero.holds());
}

TEST_CASE("check_refines agrees with the truth-table oracle") {
  std::mt19937_64 rng(73);
  SatService sat;
  int holds_count = 0;
  for (int round = 0; round < 200; ++round) {
    NnfDag dag(VarDecl{3, 3});
    RandomNnfParams params{3, 3, 8, 3};
    NodeId f = gen_random_nnf(dag, params, rng);
    NodeId ft = gen_random_nnf(dag, params, rng);
    RefinementReport r = check_refines(dag, ft, f, all_inputs(3), sat);
    REQUIRE_FALSE(r.timed_out());
    bool expected = oracle_refines(dag, ft, f, 3, 3);
    CHECK(r.holds() == expected);
    if (expected) ++holds_count;
  }
  CHECK(holds_count > 0);
  CHECK(holds_count < 200);
}

TEST_CASE("find_fd: and pattern") {
  auto r = parse_qdimacs("p cnf 3 3\na 3 0\ne 1 2 0\n-1 2 0\n-1 3 0\n1 -2 -3 0\n");
  FDefSystem sys;
  CHECK(find_fd(r.clauses, sys));
  REQUIRE(sys.contains(out_var(1)));
  const FDef& d = sys.def(out_var(1));
  CHECK(d.base == FDef::Base::And);
  CHECK_FALSE(d.negated);
  CHECK(d.args == std::vector<Lit>{Lit{out_var(2), true}, Lit{in_var(1), true}});
  CHECK(d.display_op() == "and");
}

TEST_CASE("find_fd: or pattern (Example 3 gate)") {
  auto g = parse_qdimacs(g_qdimacs());
  FDefSystem sys;
  CHECK(find_fd(g.clauses, sys));
  REQUIRE(sys.contains(out_var(1)));
  const FDef& d = sys.def(out_var(1));
  CHECK(d.base == FDef::Base::Or);
  CHECK(d.args == std::vector<Lit>{Lit{out_var(2), true}, Lit{in_var(1), true}});
  CHECK(d.display_op() == "or");
}

TEST_CASE("find_fd: xor pair keeps only the acyclic first") {
  // x1 <-> x2 (+) y1 and x2 <-> x1 (+) y2
  auto r = parse_qdimacs(
      "p cnf 4 8\na 3 4 0\ne 1 2 0\n"
      "-1 2 3 0\n-1 -2 -3 0\n1 -2 3 0\n1 2 -3 0\n"
      "-2 1 4 0\n-2 -1 -4 0\n2 -1 4 0\n2 1 -4 0\n");
  FDefSystem sys;
  find_fd(r.clauses, sys);
  CHECK(sys.contains(out_var(1)));
  CHECK_FALSE(sys.contains(out_var(2)));
  CHECK(sys.def(out_var(1)).base == FDef::Base::Xor);
  CHECK(sys.def(out_var(1)).display_op() == "xor");
}

TEST_CASE("find_fd: nand, nor, not and xnor spellings") {
  auto nand = parse_qdimacs("p cnf 3 3\na 2 3 0\ne 1 0\n1 2 0\n1 3 0\n-1 -2 -3 0\n");
  FDefSystem s1;
  find_fd(nand.clauses, s1);
  REQUIRE(s1.contains(out_var(1)));
  CHECK(s1.def(out_var(1)).display_op() == "nand");

  auto nor = parse_qdimacs("p cnf 3 3\na 2 3 0\ne 1 0\n-1 -2 0\n-1 -3 0\n1 2 3 0\n");
  FDefSystem s2;
  find_fd(nor.clauses, s2);
  REQUIRE(s2.contains(out_var(1)));
  CHECK(s2.def(out_var(1)).display_op() == "nor");

  auto nt = parse_qdimacs("p cnf 2 2\na 2 0\ne 1 0\n-1 -2 0\n1 2 0\n");
  FDefSystem s3;
  find_fd(nt.clauses, s3);
  REQUIRE(s3.contains(out_var(1)));
  CHECK(s3.def(out_var(1)).display_op() == "not");

  auto xnor = parse_qdimacs("p cnf 3 4\na 2 3 0\ne 1 0\n1 2 3 0\n1 -2 -3 0\n-1 -2 3 0\n-1 2 -3 0\n");
  FDefSystem s4;
  find_fd(xnor.clauses, s4);
  REQUIRE(s4.contains(out_var(1)));
  CHECK(s4.def(out_var(1)).display_op() == "xnor");
}

TEST_CASE("fdef systems stay acyclic and topologically ordered") {
  FDefSystem sys;
  CHECK(sys.try_add(out_var(2), FDef{FDef::Base::And, false, {Lit{in_var(1), true}}}));
  CHECK(sys.try_add(out_var(1),
                    FDef{FDef::Base::And, false,
                         {Lit{out_var(2), true}, Lit{in_var(2), true}}}));
  // would close a cycle
  CHECK_FALSE(sys.try_add(out_var(3),
                          FDef{FDef::Base::And, false, {Lit{out_var(3), false}}}));
  std::vector<VarId> topo = sys.topo_order();
  CHECK(topo == std::vector<VarId>{out_var(2), out_var(1)});
}

TEST_CASE("theta on Example 3: pivoting x2 with T = {x1}") {
  SatService sat;
  NnfDag dag(VarDecl{2, 2});
  auto g = parse_qdimacs(g_qdimacs());
  FDefSystem sys;
  REQUIRE(sys.try_add(out_var(1), FDef{FDef::Base::Or, false,
                                       {Lit{out_var(2), true}, Lit{in_var(1), true}}}));
  CHECK(theta_tautology(dag, g.clauses, sys, out_var(2), false, sat) == Outcome::True);
}

TEST_CASE("theta with empty T reduces to the unateness test") {
  std::mt19937_64 rng(79);
  SatService sat;
  for (int round = 0; round < 100; ++round) {
    RandomCnfParams p{3, 3, 7, 3};
    ClauseSet s = gen_random_cnf(p, rng);
    if (s.output_support().empty()) continue;
    VarId x = s.output_support()[rng() % s.output_support().size()];
    NnfDag dag(VarDecl{3, 3});
    NodeId f = s.to_nnf(dag);
    // positive unate in x iff F|x=0 => F|x=1
    Binding b0, b1;
    b0[x] = Bound{dag.const_false()};
    b1[x] = Bound{dag.const_true()};
    NodeId implies =
        dag.lor(dag.negate(dag.substitute(f, b0)), dag.substitute(f, b1));
    bool unate = sat.is_tautology(dag, implies) == Outcome::True;
    NnfDag scratch;
    CHECK((theta_tautology(scratch, s, FDefSystem{}, x, false, sat) == Outcome::True) ==
          unate);
  }
}

TEST_CASE("theta xor instance is not a tautology") {
  // F = x1 (+) y1 as clauses
  auto r = parse_qdimacs("p cnf 2 2\na 2 0\ne 1 0\n1 2 0\n-1 -2 0\n");
  SatService sat;
  NnfDag dag;
  CHECK(theta_tautology(dag, r.clauses, FDefSystem{}, out_var(1), false, sat) ==
        Outcome::False);
}

TEST_CASE("Lemma: theta monotone in T") {
  std::mt19937_64 rng(83);
  SatService sat;
  int interesting = 0;
  for (int round = 0; round < 200; ++round) {
    RandomCnfParams p{3, 2, 7, 3};
    ClauseSet s = gen_random_cnf(p, rng);
    FDefSystem small, big;
    find_fd(s, big);
    if (big.size() == 0) continue;
    // small = empty subset of big
    std::vector<VarId> outs = s.output_support();
    std::vector<VarId> free;
    for (VarId x : outs)
      if (!big.contains(x)) free.push_back(x);
    if (free.empty()) continue;
    VarId x = free[rng() % free.size()];
    bool a = rng() & 1;
    NnfDag d1, d2;
    Outcome with_small = theta_tautology(d1, s, small, x, a, sat);
    Outcome with_big = theta_tautology(d2, s, big, x, a, sat);
    if (with_small == Outcome::True) {
      ++interesting;
      CHECK(with_big == Outcome::True);
    }
  }
  CHECK(interesting > 0);
}

TEST_CASE("fd_refine on Example 3 reaches all-FD with unit clauses") {
  SatService sat;
  auto g = parse_qdimacs(g_qdimacs());
  FdRefineResult r = fd_refine(g.clauses, FDefSystem{}, sat);
  REQUIRE_FALSE(r.timeout);
  CHECK(r.fdefs.contains(out_var(1)));
  CHECK(r.fdefs.contains(out_var(2)));
  // S' contains the unit clauses {x2} and {x1}
  bool unit_x1 = false, unit_x2 = false;
  for (std::size_t i : r.clauses.live_indices()) {
    const Clause& c = r.clauses.clause(i);
    if (c == Clause{Lit{out_var(1), true}}) unit_x1 = true;
    if (c == Clause{Lit{out_var(2), true}}) unit_x2 = true;
  }
  CHECK(unit_x1);
  CHECK(unit_x2);
  // <S'> refines <S> and implies Fun_T'
  NnfDag dag(VarDecl{2, 2});
  NodeId sp = r.clauses.to_nnf(dag);
  NodeId s0 = g.clauses.to_nnf(dag);
  CHECK(check_refines(dag, sp, s0, all_inputs(2), sat).holds());
  CHECK(oracle_refines(dag, sp, s0, 2, 2));
  NodeId fun = r.fdefs.fun_to_nnf(dag, false);
  CHECK(sat.is_tautology(dag, dag.lor(dag.negate(sp), fun)) == Outcome::True);
}

TEST_CASE("fd_refine: no patterns, no unate outputs -> unchanged") {
  // (x1|y1) & (~x1|y2): x1 is not unate either way, and no gate encoding
  auto r = parse_qdimacs("p cnf 3 2\na 2 3 0\ne 1 0\n1 2 0\n-1 3 0\n");
  SatService sat;
  FdRefineResult out = fd_refine(r.clauses, FDefSystem{}, sat);
  CHECK(out.fdefs.size() == 0);
  CHECK(out.clauses.live_count() == 2);
}

TEST_CASE("find_fd: a two-literal xor is recognized through the not pattern") {
  // (x1|y1) & (~x1|~y1) encodes x1 <-> ~y1
  auto r = parse_qdimacs("p cnf 2 2\na 2 0\ne 1 0\n1 2 0\n-1 -2 0\n");
  FDefSystem sys;
  CHECK(find_fd(r.clauses, sys));
  REQUIRE(sys.contains(out_var(1)));
  CHECK(sys.def(out_var(1)).display_op() == "not");
}

TEST_CASE("fd_refine on a unit clause set") {
  auto r = parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n");
  SatService sat;
  FdRefineResult out = fd_refine(r.clauses, FDefSystem{}, sat);
  REQUIRE(out.fdefs.contains(out_var(1)));
  CHECK(out.fdefs.def(out_var(1)).display_op() == "const1");
  CHECK(out.clauses.live_count() == 1);
}

TEST_CASE("fd_refine output always refines and implies its defs") {
  std::mt19937_64 rng(89);
  SatService sat;
  for (int round = 0; round < 100; ++round) {
    RandomCnfParams p{3, 3, 8, 3};
    ClauseSet s = gen_random_cnf(p, rng);
    FdRefineResult out = fd_refine(s, FDefSystem{}, sat);
    REQUIRE_FALSE(out.timeout);
    NnfDag dag(VarDecl{3, 3});
    NodeId sp = out.clauses.to_nnf(dag);
    NodeId s0 = s.to_nnf(dag);
    CHECK(oracle_refines(dag, sp, s0, 3, 3));
    NodeId fun = out.fdefs.fun_to_nnf(dag, false);
    CHECK(sat.is_tautology(dag, dag.lor(dag.negate(sp), fun)) == Outcome::True);
  }
}

TEST_CASE("get_def_ckt worked cases") {
  SatService sat;
  NnfDag dag(VarDecl{2, 2});

  FDefSystem just_one;
  just_one.try_add(out_var(1), FDef{FDef::Base::And, false, {}});  // x1 <-> 1
  NodeId d = get_def_ckt(dag, just_one);
  CHECK(d == dag.literal(out_var(1)));

  FDefSystem empty;
  CHECK(get_def_ckt(dag, empty) == dag.const_true());

  FDefSystem two;
  REQUIRE(two.try_add(out_var(2), FDef{FDef::Base::And, false, {Lit{in_var(1), true}}}));
  REQUIRE(two.try_add(out_var(1), FDef{FDef::Base::And, false,
                                       {Lit{out_var(2), true}, Lit{in_var(2), true}}}));
  NodeId ckt = get_def_ckt(dag, two);
  // oracle: equivalent to (x2 <-> y1) & (x1 <-> (x2 & y2))
  NodeId x2_iff = dag.lor(dag.land(dag.literal(out_var(2)), dag.literal(in_var(1))),
                          dag.land(dag.literal(out_var(2), false), dag.literal(in_var(1), false)));
  NodeId body = dag.land(dag.literal(out_var(2)), dag.literal(in_var(2)));
  NodeId x1_iff = dag.lor(dag.land(dag.literal(out_var(1)), body),
                          dag.land(dag.literal(out_var(1), false), dag.negate(body)));
  CHECK(tt_equal(dag, ckt, dag.land(x2_iff, x1_iff)));
  // syntactic SynNNF by construction
  SynAnalysis an(dag, ckt, SynAnalysis::full_order(dag));
  for (int i = 1; i <= 2; ++i) CHECK_FALSE(an.syntactic_fail_node(i));
}

TEST_CASE("get_def_ckt refines when T covers all outputs (Lemma on full T)") {
  std::mt19937_64 rng(97);
  SatService sat;
  int covered = 0;
  for (int round = 0; round < 150 && covered < 20; ++round) {
    RandomCnfParams p{2, 2, 6, 3};
    ClauseSet s = gen_random_cnf(p, rng);
    FdRefineResult out = fd_refine(s, FDefSystem{}, sat);
    std::vector<VarId> outs = s.output_support();
    bool all = !outs.empty();
    for (VarId x : outs)
      if (!out.fdefs.contains(x)) all = false;
    if (!all) continue;
    NnfDag dag(VarDecl{2, 2});
    if (s.to_nnf(dag) == dag.const_false()) continue;
    std::vector<VarId> keep = outs;
    for (VarId v : s.y_vars()) keep.push_back(v);
    NodeId ckt = get_def_ckt(dag, out.fdefs.restricted(keep));
    CHECK(oracle_refines(dag, ckt, s.to_nnf(dag), 2, 2));
    ++covered;
  }
  CHECK(covered > 0);
}

TEST_CASE("Prop 1(4): unate pivot refines") {
  std::mt19937_64 rng(101);
  SatService sat;
  int tested = 0;
  for (int round = 0; round < 200 && tested < 60; ++round) {
    NnfDag dag(VarDecl{2, 2});
    RandomNnfParams params{2, 2, 7, 3};
    NodeId f = gen_random_nnf(dag, params, rng);
    VarId x = out_var(1 + (rng() % 2));
    Binding b0, b1;
    b0[x] = Bound{dag.const_false()};
    b1[x] = Bound{dag.const_true()};
    NodeId f0 = dag.substitute(f, b0), f1 = dag.substitute(f, b1);
    bool pos_unate = sat.is_tautology(dag, dag.lor(dag.negate(f0), f1)) == Outcome::True;
    if (!pos_unate) continue;
    ++tested;
    NodeId pivoted = dag.land(dag.literal(x), f1);
    CHECK(oracle_refines(dag, pivoted, f, 2, 2));
    CHECK(check_refines(dag, pivoted, f, all_inputs(2), sat).holds());
  }
  CHECK(tested >= 20);
}

TEST_CASE("the naive disjunction closure is unsound: pinned counterexample") {
  // F1 = x1 refines itself; F2 = y1 & x2 is refined by x2 alone. Their
  // disjunction x1 | x2 does not refine (x1 | (y1 & x2)): at y1 = 0 the
  // assignment x1=0, x2=1 satisfies the candidate but not the original.
  NnfDag dag(VarDecl{2, 1});
  NodeId f1 = dag.literal(out_var(1));
  NodeId f2 = dag.land(dag.literal(in_var(1)), dag.literal(out_var(2)));
  NodeId ft2 = dag.literal(out_var(2));
  CHECK(oracle_refines(dag, f1, f1, 2, 1));
  CHECK(oracle_refines(dag, ft2, f2, 2, 1));
  CHECK_FALSE(oracle_refines(dag, dag.lor(f1, ft2), dag.lor(f1, f2), 2, 1));
}

TEST_CASE("Prop 1(5): closure under input-exact refinements / disjoint outputs") {
  std::mt19937_64 rng(103);
  SatService sat;
  int conj_tested = 0, disj_tested = 0;
  for (int round = 0; round < 250; ++round) {
    NnfDag dag(VarDecl{4, 2});
    // F1 over x1,x2; F2 over x3,x4 (disjoint output supports), shared inputs
    auto gen_over = [&](std::uint32_t base) {
      std::vector<NodeId> pool;
      for (std::uint32_t i = base; i < base + 2; ++i) {
        pool.push_back(dag.literal(out_var(i)));
        pool.push_back(dag.literal(out_var(i), false));
      }
      for (std::uint32_t j = 1; j <= 2; ++j) {
        pool.push_back(dag.literal(in_var(j)));
        pool.push_back(dag.literal(in_var(j), false));
      }
      for (int t = 0; t < 6; ++t) {
        std::vector<NodeId> kids{pool[rng() % pool.size()], pool[rng() % pool.size()]};
        pool.push_back((rng() & 1) ? dag.land(std::move(kids)) : dag.lor(std::move(kids)));
      }
      return pool.back();
    };
    NodeId f1 = gen_over(1), f2 = gen_over(3);
    NodeId ft1 = gen_over(1), ft2 = gen_over(3);
    bool r1 = oracle_refines(dag, ft1, f1, 4, 2);
    bool r2 = oracle_refines(dag, ft2, f2, 4, 2);
    if (!r1 || !r2) continue;
    // conjunction composes as soon as the output supports are disjoint
    CHECK(oracle_refines(dag, dag.land(ft1, ft2), dag.land(f1, f2), 4, 2));
    ++conj_tested;
    // disjunction needs the refinements to keep the realizable input region
    // exact (satisfiable at a Y only when the original is)
    std::vector<VarId> xs{out_var(1), out_var(2), out_var(3), out_var(4)};
    std::vector<VarId> sup = xs;
    sup.push_back(in_var(1));
    sup.push_back(in_var(2));
    auto input_exact = [&](NodeId ft, NodeId f) {
      return TruthTable::of(dag, ft, sup).exists(xs) ==
             TruthTable::of(dag, f, sup).exists(xs);
    };
    if (input_exact(ft1, f1) && input_exact(ft2, f2)) {
      CHECK(oracle_refines(dag, dag.lor(ft1, ft2), dag.lor(f1, f2), 4, 2));
      ++disj_tested;
    }
  }
  CHECK(conj_tested > 0);
  CHECK(disj_tested > 0);
}

TEST_CASE("Prop 1(1): transitivity spot checks") {
  std::mt19937_64 rng(107);
  SatService sat;
  int chained = 0;
  for (int round = 0; round < 300 && chained < 10; ++round) {
    NnfDag dag(VarDecl{2, 2});
    RandomNnfParams params{2, 2, 6, 3};
    NodeId f1 = gen_random_nnf(dag, params, rng);
    NodeId f2 = gen_random_nnf(dag, params, rng);
    NodeId f3 = gen_random_nnf(dag, params, rng);
    if (!oracle_refines(dag, f1, f2, 2, 2) || !oracle_refines(dag, f2, f3, 2, 2)) continue;
    ++chained;
    CHECK(oracle_refines(dag, f1, f3, 2, 2));
    CHECK(check_refines(dag, f1, f3, all_inputs(2), sat).holds());
  }
  CHECK(chained > 0);
}
