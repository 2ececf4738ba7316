#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace synkc::sat {

using Var = std::int32_t;

struct Lit {
  std::int32_t x = -2;  // 2*var + sign, sign 1 = negated

  static Lit make(Var v, bool positive) { return Lit{v * 2 + (positive ? 0 : 1)}; }
  Lit operator~() const { return Lit{x ^ 1}; }
  bool sign() const { return x & 1; }  // true = negated
  Var var() const { return x >> 1; }
  bool valid() const { return x >= 0; }
  friend bool operator==(const Lit&, const Lit&) = default;
};

enum class LBool : std::uint8_t { False = 0, True = 1, Undef = 2 };

// Small CDCL solver: two-watched literals, first-UIP learning with basic
// recursive minimization, VSIDS activity heap, phase saving, Luby restarts,
// incremental solving under assumptions, conflict budgets and an interrupt
// hook. No clause deletion; sized for desk-scale queries. One instance per
// query context; instances are not shared across threads.
class Solver {
 public:
  enum class Result { Sat, Unsat, Interrupted };

  Var new_var();
  int num_vars() const { return static_cast<int>(assign_.size()); }
  void ensure_var(Var v);

  // Returns false if the clause set became trivially unsatisfiable.
  bool add_clause(std::vector<Lit> ps);
  bool ok() const { return ok_; }

  Result solve(const std::vector<Lit>& assumptions = {});

  LBool model_value(Lit l) const;
  bool model_bool(Var v) const { return model_value(Lit::make(v, true)) == LBool::True; }

  void set_conflict_budget(std::int64_t budget) { conflict_budget_ = budget; }  // <0 = off
  void set_interrupt(std::function<bool()> fn) { interrupt_ = std::move(fn); }

  std::int64_t conflicts() const { return stats_conflicts_; }
  std::int64_t propagations() const { return stats_propagations_; }

  void write_dimacs(std::ostream& out, const std::vector<Lit>& assumptions = {}) const;

 private:
  using CRef = std::int32_t;
  static constexpr CRef kNoReason = -1;

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  LBool value(Lit l) const;
  LBool value(Var v) const { return assign_[v]; }
  bool enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef confl, std::vector<Lit>& learnt, int& backtrack_level);
  bool lit_redundant(Lit l, std::uint32_t abstract_levels, std::vector<Var>& to_clear);
  void backtrack_to(int level);
  Lit pick_branch_lit();
  void attach(CRef cref);
  void bump_var(Var v);
  void decay_activity() { var_inc_ /= 0.95; }
  void rescale_activity();
  int level(Var v) const { return level_[v]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }

  // heap keyed by activity
  void heap_insert(Var v);
  Var heap_pop();
  void heap_up(int i);
  void heap_down(int i);
  bool heap_empty() const { return heap_.empty(); }

  std::vector<std::vector<Lit>> clauses_;  // originals and learnt, index = CRef
  std::vector<std::vector<Lit>> dimacs_;   // clauses as added, for dumps
  std::vector<std::vector<Watcher>> watches_;  // indexed by Lit::x
  std::vector<LBool> assign_;
  std::vector<LBool> phase_;
  std::vector<std::uint8_t> model_;
  std::vector<CRef> reason_;
  std::vector<int> level_;
  std::vector<double> activity_;
  std::vector<int> heap_pos_;
  std::vector<Var> heap_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  bool ok_ = true;
  std::vector<std::uint8_t> seen_;
  std::function<bool()> interrupt_;
  std::int64_t conflict_budget_ = -1;
  std::int64_t stats_conflicts_ = 0;
  std::int64_t stats_propagations_ = 0;
};

}  // namespace synkc::sat
