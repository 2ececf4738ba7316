#include <random>

#include "doctest.h"
#include "support.hpp"
#include "synkc/skolem.hpp"

using namespace synkc;
using namespace synkc::test;

TEST_CASE("gacks on H: psi = (0, 1)") {
  NnfDag dag;
  NodeId h = build_h(dag);
  SynAnalysis an(dag, h, SynAnalysis::full_order(dag));
  SkolemVector psi = gacks_skolem(an);
  CHECK(psi.pos_roots[0] == dag.const_false());
  CHECK(psi.pos_roots[1] == dag.const_true());
  CHECK(psi.neg_roots[0] == dag.const_true());
  CHECK(psi.neg_roots[1] == dag.const_false());
}

TEST_CASE("gacks on K: psi2 = y1 & y2, psi1 = ~y1 | y2") {
  NnfDag dag;
  NodeId k = build_k(dag);
  SynAnalysis an(dag, k, SynAnalysis::full_order(dag));
  SkolemVector psi = gacks_skolem(an);
  NodeId exp2 = dag.land(dag.literal(in_var(1)), dag.literal(in_var(2)));
  NodeId exp1 = dag.lor(dag.literal(in_var(1), false), dag.literal(in_var(2)));
  CHECK(tt_equal(dag, psi.pos_roots[1], exp2));
  CHECK(tt_equal(dag, psi.pos_roots[0], exp1));
  // dual rail really is the complement
  for (int j = 0; j < 2; ++j) {
    std::vector<VarId> sup{in_var(1), in_var(2)};
    TruthTable p = TruthTable::of(dag, psi.pos_roots[j], sup);
    TruthTable q = TruthTable::of(dag, psi.neg_roots[j], sup);
    for (std::uint64_t r = 0; r < p.num_rows(); ++r) CHECK(p.value(r) != q.value(r));
  }
}

TEST_CASE("gacks single output without inputs") {
  NnfDag dag(VarDecl{1, 0});
  NodeId f = dag.literal(out_var(1));
  SynAnalysis an(dag, f, SynAnalysis::full_order(dag));
  SkolemVector psi = gacks_skolem(an);
  CHECK(psi.pos_roots[0] == dag.const_true());
}

TEST_CASE("eliminate_outputs on K and H") {
  SatService sat;
  NnfDag dag;
  NodeId k = build_k(dag);
  SynAnalysis an(dag, k, SynAnalysis::full_order(dag));
  QuantElimResult q = eliminate_outputs(an, 2, true);
  NodeId expected = dag.lor(dag.literal(in_var(1), false), dag.literal(in_var(2)));
  CHECK(tt_equal(dag, q.root, expected));
  CHECK(q.exact);
  CHECK(eliminate_outputs(an, 0, false).root == k);

  NnfDag dag2;
  NodeId h = build_h(dag2);
  SynAnalysis an2(dag2, h, SynAnalysis::full_order(dag2));
  QuantElimResult q2 = eliminate_outputs(an2, 2, false);
  CHECK(q2.root == dag2.const_true());
  CHECK_FALSE(q2.exact);  // over-approximate: H is not in SynNNF
}

TEST_CASE("error formula on the worked examples") {
  SatService sat;
  NnfDag dag;
  NodeId h = build_h(dag);
  SynAnalysis an(dag, h, SynAnalysis::full_order(dag));
  SkolemVector psi = gacks_skolem(an);
  CHECK(error_formula_check(dag, h, psi, sat).verdict ==
        ErrorFormulaResult::Verdict::Correct);

  NnfDag dagk;
  NodeId k = build_k(dagk);
  SynAnalysis ank(dagk, k, SynAnalysis::full_order(dagk));
  SkolemVector psik = gacks_skolem(ank);
  CHECK(error_formula_check(dagk, k, psik, sat).verdict ==
        ErrorFormulaResult::Verdict::Correct);

  // constant-0 vector for F = x1 is incorrect, with a witness
  NnfDag d2(VarDecl{1, 0});
  NodeId f = d2.literal(out_var(1));
  SkolemVector zero{{out_var(1)}, {d2.const_false()}, {d2.const_true()}};
  ErrorFormulaResult r = error_formula_check(d2, f, zero, sat);
  REQUIRE(r.verdict == ErrorFormulaResult::Verdict::Incorrect);
  CHECK(r.x_model.get(out_var(1)) == true);
  CHECK(r.psi_values.get(out_var(1)) == false);
}

TEST_CASE("skolem_to_synnnf worked cases") {
  SatService sat;
  NnfDag dag(VarDecl{1, 1});
  SkolemVector one{{out_var(1)}, {dag.const_true()}, {dag.const_false()}};
  CHECK(skolem_to_synnnf(dag, one) == dag.literal(out_var(1)));

  SkolemVector y{{out_var(1)}, {dag.literal(in_var(1))}, {dag.literal(in_var(1), false)}};
  NodeId ft = skolem_to_synnnf(dag, y);
  NodeId expected = dag.lor(dag.land(dag.literal(out_var(1)), dag.literal(in_var(1))),
                            dag.land(dag.literal(out_var(1), false), dag.literal(in_var(1), false)));
  CHECK(ft == expected);

  NnfDag dagh;
  NodeId h = build_h(dagh);
  SynAnalysis anh(dagh, h, SynAnalysis::full_order(dagh));
  SkolemVector psih = gacks_skolem(anh);
  NodeId fth = skolem_to_synnnf(dagh, psih);
  NodeId expect_h = dagh.land(dagh.literal(out_var(1), false), dagh.literal(out_var(2)));
  CHECK(tt_equal(dagh, fth, expect_h));
  SynAnalysis ant(dagh, fth, SynAnalysis::full_order(dagh));
  for (int i = 1; i <= 2; ++i) CHECK_FALSE(ant.syntactic_fail_node(i));
}

TEST_CASE("Theorem 1(ii): gacks correct for SynNNF members; size bound holds") {
  std::mt19937_64 rng(61);
  SatService sat;
  int members = 0;
  for (int round = 0; round < 300; ++round) {
    NnfDag dag(VarDecl{3, 3});
    RandomNnfParams params{3, 3, 10, 3};
    NodeId f = gen_random_nnf(dag, params, rng);
    SynAnalysis an(dag, f, SynAnalysis::full_order(dag));
    bool member =
        an.check_membership(CheckMethod::Semantic, sat).verdict == MembershipReport::Verdict::In;
    SynAnalysis an2(dag, f, SynAnalysis::full_order(dag));
    std::size_t fhat_size = dag.size(an2.fhat());
    SkolemVector psi = gacks_skolem(an2);
    CHECK(psi.node_count(dag) <= 2 * 3 * fhat_size + 8 * 3);
    if (member) {
      ++members;
      CHECK(error_formula_check(dag, f, psi, sat).verdict ==
            ErrorFormulaResult::Verdict::Correct);
    }
  }
  CHECK(members > 0);
}

TEST_CASE("gacks can be wrong: ~x1 & (x1 | ~x2) forces x2=0 but psi2 = 1") {
  SatService sat;
  NnfDag dag(VarDecl{2, 0});
  NodeId f = dag.land(dag.literal(out_var(1), false),
                      dag.lor(dag.literal(out_var(1)), dag.literal(out_var(2), false)));
  SynAnalysis an(dag, f, SynAnalysis::full_order(dag));
  SkolemVector psi = gacks_skolem(an);
  CHECK(psi.pos_roots[1] == dag.const_true());
  CHECK(error_formula_check(dag, f, psi, sat).verdict ==
        ErrorFormulaResult::Verdict::Incorrect);
}

TEST_CASE("Theorem 3(ii) dual route: error formula vs per-i unrealizability under Psi") {
  std::mt19937_64 rng(67);
  SatService sat;
  int correct_count = 0, incorrect_count = 0;
  for (int round = -1; round < 200; ++round) {
    NnfDag dag(VarDecl{3, 3});
    RandomNnfParams params{3, 3, 9, 3};
    NodeId f;
    if (round < 0) {
      // round -1 pins an instance whose gacks vector is incorrect
      f = dag.land(dag.literal(out_var(1), false),
                   dag.lor(dag.literal(out_var(1)), dag.literal(out_var(2), false)));
    } else {
      f = gen_random_nnf(dag, params, rng);
    }
    SynAnalysis an(dag, f, SynAnalysis::full_order(dag));
    SkolemVector psi = gacks_skolem(an);
    bool correct =
        error_formula_check(dag, f, psi, sat).verdict == ErrorFormulaResult::Verdict::Correct;

    // independent route: Gamma_i = Delta_i[X_{i+1} -> Psi, bar X_{i+1} -> ~Psi],
    // then zeta over (x_i, bar x_i) at the Gamma root
    bool all_unreal = true;
    for (int i = 1; i <= an.n(); ++i) {
      Binding compose;
      for (int j = i + 1; j <= an.n(); ++j) {
        VarId xj = an.order()[j - 1];
        compose[xj] = Bound{psi.pos_roots[j - 1], psi.neg_roots[j - 1]};
        compose[bar_var(xj.index)] = Bound{psi.neg_roots[j - 1], psi.pos_roots[j - 1]};
      }
      NodeId gamma = dag.substitute(an.reduct(i), compose);
      VarId xi = an.order()[i - 1];
      auto fix = [&](int j, int k) {
        Binding b;
        b[xi] = Bound{j ? dag.const_true() : dag.const_false()};
        b[bar_var(xi.index)] = Bound{k ? dag.const_true() : dag.const_false()};
        return dag.substitute(gamma, b);
      };
      // zeta conjoined with F itself: the unrealizability condition only
      // bites at input valuations that admit some satisfying assignment
      SatResult zeta = sat.is_sat(dag, {RootSpec{fix(1, 1), false}, RootSpec{fix(1, 0), true},
                                        RootSpec{fix(0, 1), true}, RootSpec{f, false}});
      if (zeta.kind == SatResult::Kind::Sat) all_unreal = false;
    }
    CHECK(correct == all_unreal);
    (correct ? correct_count : incorrect_count)++;
  }
  CHECK(correct_count > 0);
  CHECK(incorrect_count > 0);
}

TEST_CASE("full elimination depends only on Y and matches exists X F") {
  std::mt19937_64 rng(149);
  SatService sat;
  int members = 0;
  for (int round = 0; round < 150 && members < 40; ++round) {
    NnfDag dag(VarDecl{3, 3});
    RandomNnfParams params{3, 3, 9, 3};
    NodeId f = gen_random_nnf(dag, params, rng);
    SynAnalysis an(dag, f, SynAnalysis::full_order(dag));
    if (an.check_membership(CheckMethod::Semantic, sat).verdict !=
        MembershipReport::Verdict::In)
      continue;
    ++members;
    QuantElimResult q = eliminate_outputs(an, 3, true);
    for (VarId v : dag.support(q.root)) CHECK(v.kind == VarKind::Input);
    std::vector<VarId> xs = an.order();
    std::vector<VarId> sup = xs;
    for (std::uint32_t j = 1; j <= 3; ++j) sup.push_back(in_var(j));
    CHECK(TruthTable::of(dag, f, sup).exists(xs) == TruthTable::of(dag, q.root, sup));
  }
  CHECK(members >= 10);
}

TEST_CASE("fundamental skolem contract at desk scale") {
  std::mt19937_64 rng(71);
  SatService sat;
  for (int round = 0; round < 100; ++round) {
    NnfDag dag(VarDecl{3, 3});
    RandomNnfParams params{3, 3, 9, 3};
    NodeId f = gen_random_nnf(dag, params, rng);
    SynAnalysis an(dag, f, SynAnalysis::full_order(dag));
    if (an.check_membership(CheckMethod::Semantic, sat).verdict !=
        MembershipReport::Verdict::In)
      continue;
    SkolemVector psi = gacks_skolem(an);
    std::vector<VarId> xs = an.order();
    std::vector<VarId> sup = xs;
    for (std::uint32_t j = 1; j <= 3; ++j) sup.push_back(in_var(j));
    TruthTable tf = TruthTable::of(dag, f, sup);
    std::vector<TruthTable> psi_tts;
    for (NodeId p : psi.pos_roots) psi_tts.push_back(TruthTable::of(dag, p, sup));
    CHECK(tt_skolem_correct(tf, xs, psi_tts));
  }
}
