#include "synkc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace synkc::sat {

namespace {

// Luby sequence, 1-indexed: 1 1 2 1 1 2 4 ...
std::int64_t luby(std::int64_t i) {
  std::int64_t k = 1;
  while ((1LL << (k + 1)) - 1 <= i) ++k;
  while (i != (1LL << k) - 1) {
    i -= (1LL << k) - 1;
    k = 1;
    while ((1LL << (k + 1)) - 1 <= i) ++k;
  }
  return 1LL << (k - 1);
}

}  // namespace

Var Solver::new_var() {
  Var v = static_cast<Var>(assign_.size());
  assign_.push_back(LBool::Undef);
  phase_.push_back(LBool::False);
  model_.push_back(0);
  reason_.push_back(kNoReason);
  level_.push_back(0);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

void Solver::ensure_var(Var v) {
  while (num_vars() <= v) new_var();
}

LBool Solver::value(Lit l) const {
  LBool b = assign_[l.var()];
  if (b == LBool::Undef) return b;
  bool t = (b == LBool::True) != l.sign();
  return t ? LBool::True : LBool::False;
}

LBool Solver::model_value(Lit l) const {
  if (l.var() >= num_vars()) return LBool::Undef;
  bool t = (model_[l.var()] != 0) != l.sign();
  return t ? LBool::True : LBool::False;
}

void Solver::attach(CRef cref) {
  const auto& c = clauses_[cref];
  watches_[(~c[0]).x].push_back({cref, c[1]});
  watches_[(~c[1]).x].push_back({cref, c[0]});
}

bool Solver::add_clause(std::vector<Lit> ps) {
  if (!ok_) return false;
  if (decision_level() != 0) backtrack_to(0);
  for (Lit l : ps) ensure_var(l.var());
  dimacs_.push_back(ps);
  std::sort(ps.begin(), ps.end(), [](Lit a, Lit b) { return a.x < b.x; });
  std::vector<Lit> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Lit l = ps[i];
    if (i && l == ps[i - 1]) continue;
    if (i && l.var() == ps[i - 1].var()) return true;  // tautology
    if (value(l) == LBool::True) return true;          // satisfied at level 0
    if (value(l) == LBool::False) continue;            // falsified at level 0
    out.push_back(l);
  }
  if (out.empty()) {
    ok_ = false;
    return false;
  }
  if (out.size() == 1) {
    if (!enqueue(out[0], kNoReason)) {
      ok_ = false;
      return false;
    }
    ok_ = (propagate() == kNoReason);
    return ok_;
  }
  CRef cref = static_cast<CRef>(clauses_.size());
  clauses_.push_back(std::move(out));
  attach(cref);
  return true;
}

bool Solver::enqueue(Lit l, CRef reason) {
  if (value(l) == LBool::False) return false;
  if (value(l) == LBool::True) return true;
  assign_[l.var()] = l.sign() ? LBool::False : LBool::True;
  reason_[l.var()] = reason;
  level_[l.var()] = decision_level();
  trail_.push_back(l);
  return true;
}

Solver::CRef Solver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    ++stats_propagations_;
    auto& ws = watches_[p.x];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == LBool::True) {
        ws[j++] = ws[i++];
        continue;
      }
      auto& c = clauses_[w.cref];
      Lit false_lit = ~p;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (value(c[0]) == LBool::True) {
        ws[j++] = {w.cref, c[0]};
        ++i;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != LBool::False) {
          std::swap(c[1], c[k]);
          watches_[(~c[1]).x].push_back({w.cref, c[0]});
          moved = true;
          break;
        }
      }
      if (moved) {
        ++i;
        continue;
      }
      // unit or conflict on c[0]
      ws[j++] = {w.cref, c[0]};
      ++i;
      if (!enqueue(c[0], w.cref)) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
    }
    ws.resize(j);
  }
  return kNoReason;
}

void Solver::bump_var(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) rescale_activity();
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void Solver::rescale_activity() {
  for (double& a : activity_) a *= 1e-100;
  var_inc_ *= 1e-100;
}

bool Solver::lit_redundant(Lit l, std::uint32_t abstract_levels, std::vector<Var>& to_clear) {
  std::vector<Lit> stack{l};
  std::vector<Var> explored;
  while (!stack.empty()) {
    Lit p = stack.back();
    stack.pop_back();
    CRef r = reason_[p.var()];
    if (r == kNoReason) {
      for (Var v : explored) seen_[v] = 0;
      return false;
    }
    const auto& c = clauses_[r];
    for (std::size_t k = 0; k < c.size(); ++k) {
      Lit q = c[k];
      if (q.var() == p.var() || seen_[q.var()] || level(q.var()) == 0) continue;
      std::uint32_t mask = 1u << (level(q.var()) & 31);
      if (reason_[q.var()] == kNoReason || !(abstract_levels & mask)) {
        for (Var v : explored) seen_[v] = 0;
        return false;
      }
      seen_[q.var()] = 1;
      explored.push_back(q.var());
      stack.push_back(q);
    }
  }
  // marks stay; the caller resets them together with the main loop's
  to_clear.insert(to_clear.end(), explored.begin(), explored.end());
  return true;
}

void Solver::analyze(CRef confl, std::vector<Lit>& learnt, int& backtrack_level) {
  learnt.clear();
  learnt.push_back(Lit{});  // slot for the asserting literal
  int counter = 0;
  Lit p{-2};
  std::size_t index = trail_.size();
  std::vector<Var> to_clear;

  CRef reason = confl;
  for (;;) {
    const auto& c = clauses_[reason];
    for (std::size_t k = 0; k < c.size(); ++k) {
      Lit q = c[k];
      if (p.valid() && q == p) continue;
      if (!seen_[q.var()] && level(q.var()) > 0) {
        seen_[q.var()] = 1;
        to_clear.push_back(q.var());
        bump_var(q.var());
        if (level(q.var()) >= decision_level()) {
          ++counter;
        } else {
          learnt.push_back(q);
        }
      }
    }
    do {
      p = trail_[--index];
    } while (!seen_[p.var()]);
    seen_[p.var()] = 0;
    --counter;
    if (counter == 0) break;
    reason = reason_[p.var()];
  }
  learnt[0] = ~p;

  // conflict clause minimization
  std::uint32_t abstract_levels = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k)
    abstract_levels |= 1u << (level(learnt[k].var()) & 31);
  std::size_t j = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    if (reason_[learnt[k].var()] == kNoReason ||
        !lit_redundant(learnt[k], abstract_levels, to_clear))
      learnt[j++] = learnt[k];
  }
  learnt.resize(j);

  if (learnt.size() == 1) {
    backtrack_level = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k)
      if (level(learnt[k].var()) > level(learnt[max_i].var())) max_i = k;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level(learnt[1].var());
  }
  for (Var v : to_clear) seen_[v] = 0;
}

void Solver::backtrack_to(int lvl) {
  if (decision_level() <= lvl) return;
  for (std::size_t i = trail_.size(); i > static_cast<std::size_t>(trail_lim_[lvl]);) {
    --i;
    Var v = trail_[i].var();
    phase_[v] = assign_[v];
    assign_[v] = LBool::Undef;
    reason_[v] = kNoReason;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

void Solver::heap_insert(Var v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

void Solver::heap_up(int i) {
  Var v = heap_[i];
  while (i > 0) {
    int p = (i - 1) >> 1;
    if (activity_[heap_[p]] >= activity_[v]) break;
    heap_[i] = heap_[p];
    heap_pos_[heap_[i]] = i;
    i = p;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::heap_down(int i) {
  Var v = heap_[i];
  int n = static_cast<int>(heap_.size());
  for (;;) {
    int c = 2 * i + 1;
    if (c >= n) break;
    if (c + 1 < n && activity_[heap_[c + 1]] > activity_[heap_[c]]) ++c;
    if (activity_[heap_[c]] <= activity_[v]) break;
    heap_[i] = heap_[c];
    heap_pos_[heap_[i]] = i;
    i = c;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

Var Solver::heap_pop() {
  Var v = heap_[0];
  heap_pos_[v] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_[0]] = 0;
    heap_down(0);
  }
  return v;
}

Lit Solver::pick_branch_lit() {
  while (!heap_empty()) {
    Var v = heap_[0];
    if (assign_[v] == LBool::Undef) {
      heap_pop();
      return Lit::make(v, phase_[v] == LBool::True);
    }
    heap_pop();
  }
  return Lit{-2};
}

Solver::Result Solver::solve(const std::vector<Lit>& assumptions) {
  if (!ok_) return Result::Unsat;
  for (Lit l : assumptions) ensure_var(l.var());
  backtrack_to(0);
  if (propagate() != kNoReason) {
    ok_ = false;
    return Result::Unsat;
  }

  std::int64_t budget = conflict_budget_;
  std::int64_t restart_round = 1;
  std::int64_t conflicts_until_restart = luby(restart_round) * 100;
  std::vector<Lit> learnt;

  for (;;) {
    CRef confl = propagate();
    if (confl != kNoReason) {
      ++stats_conflicts_;
      if (budget >= 0 && --budget < 0) {
        backtrack_to(0);
        return Result::Interrupted;
      }
      if ((stats_conflicts_ & 255) == 0 && interrupt_ && interrupt_()) {
        backtrack_to(0);
        return Result::Interrupted;
      }
      if (decision_level() == 0) {
        ok_ = false;
        return Result::Unsat;
      }
      // never undo assumption levels on learning: if the asserting level is
      // below the assumption prefix, the prefix re-propagates after jump
      int back;
      analyze(confl, learnt, back);
      backtrack_to(back);
      if (learnt.size() == 1) {
        if (!enqueue(learnt[0], kNoReason)) {
          ok_ = false;
          return Result::Unsat;
        }
      } else {
        CRef cref = static_cast<CRef>(clauses_.size());
        clauses_.push_back(learnt);
        attach(cref);
        enqueue(learnt[0], cref);
      }
      decay_activity();
      if (--conflicts_until_restart <= 0) {
        ++restart_round;
        conflicts_until_restart = luby(restart_round) * 100;
        backtrack_to(0);
      }
      continue;
    }
    // choose next assumption, then decide
    Lit next{-2};
    while (decision_level() < static_cast<int>(assumptions.size())) {
      Lit a = assumptions[decision_level()];
      if (value(a) == LBool::True) {
        new_decision_level();  // dummy level keeps assumption indexing aligned
      } else if (value(a) == LBool::False) {
        backtrack_to(0);
        return Result::Unsat;  // conflicting assumptions
      } else {
        next = a;
        break;
      }
    }
    if (!next.valid()) next = pick_branch_lit();
    if (!next.valid()) {
      for (Var v = 0; v < num_vars(); ++v) model_[v] = (assign_[v] == LBool::True) ? 1 : 0;
      backtrack_to(0);
      return Result::Sat;
    }
    new_decision_level();
    enqueue(next, kNoReason);
  }
}

void Solver::write_dimacs(std::ostream& out, const std::vector<Lit>& assumptions) const {
  out << "p cnf " << num_vars() << " " << dimacs_.size() + assumptions.size() << "\n";
  for (const auto& c : dimacs_) {
    for (Lit l : c) out << (l.sign() ? -(l.var() + 1) : (l.var() + 1)) << " ";
    out << "0\n";
  }
  for (Lit l : assumptions) out << (l.sign() ? -(l.var() + 1) : (l.var() + 1)) << " 0\n";
}

}  // namespace synkc::sat
