#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kbp/kernel.hpp"

namespace kbp {

struct GuardedAction;  // guarded.hpp

// Labelling over a plain structure: classical CTLK semantics over the graph
// (RS, RT), K/M quantifying over reachable accessible states. Paths are
// infinite; deadlock states satisfy no EX/EG and A-quantifiers vacuously.
// The result is restricted to reachable states.
Bitset eval_ets(const TransitionStructure& m, const FormulaPtr& f);

// Labelling of an NNF formula over a must/can structure: E-quantified path
// operators and M follow the lower bound, A-quantified ones and K the upper
// bound. Restricted to states reachable in the upper bound.
Bitset eval_mc(const MustCanStructure& y, const FormulaPtr& f);

// Negation normal form for full CTLK (same transform as nnf()).
FormulaPtr ctlk_nnf(const FormulaPtr& f);

// Reusable labellers: reachability and liveness are computed once and the
// per-subformula memo is shared across every formula evaluated on the same
// structure. Prefer these when many formulas are checked against one model.
class EtsEvaluator {
 public:
  explicit EtsEvaluator(const TransitionStructure& m);
  ~EtsEvaluator();
  EtsEvaluator(EtsEvaluator&&) noexcept;
  Bitset operator()(const FormulaPtr& f);  // result restricted to reachable states
  const Bitset& reachable() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class McEvaluator {
 public:
  explicit McEvaluator(const MustCanStructure& y);
  ~McEvaluator();
  McEvaluator(McEvaluator&&) noexcept;
  Bitset operator()(const FormulaPtr& nnf_formula);  // restricted to upper-reachable
  const Bitset& reachable_lower() const;
  const Bitset& reachable_upper() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct CheckRequest {
  enum Kind { Initial, Reachable } kind = Initial;
  std::string name;
  FormulaPtr formula;  // Reachable: a state predicate (no path/epistemic ops)
};

struct WitnessStep {
  std::string action;
  std::uint32_t target;
};

struct Verdict {
  bool holds = false;
  // Reachable + holds: a shortest action-labelled path from an initial state.
  std::optional<std::vector<WitnessStep>> witness;
  std::optional<std::uint32_t> witness_start;  // initial state the witness leaves from
  // Initial + !holds: some initial state violating the formula.
  std::optional<std::uint32_t> failing_state;
};

// Initial checks: formula must hold at every initial state. Reachable checks:
// some reachable state satisfies the predicate; the witness is the shortest
// path (ties broken by action declaration order, then successor index).
Verdict run_check(const TransitionStructure& m, const std::vector<GuardedAction>& actions,
                  const CheckRequest& req);

}  // namespace kbp
